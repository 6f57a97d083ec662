#include "linf/morphisms.hpp"

#include <set>
#include <sstream>

namespace linf {

namespace {

Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<Parity> parities_of(const Tuple& t, const GradedSpace& space) {
  std::vector<Parity> ps;
  for (int i : t) ps.push_back(space.parity(i));
  return ps;
}

int letter_sign(const Tuple& word, const GradedSpace& space) {
  int odd = 0;
  for (int j : word)
    if (space.parity(j).is_odd()) ++odd;
  return (odd * (odd - 1) / 2) % 2 ? -1 : 1;
}

void check_target(const Structure& s, Variant target, const std::optional<InnerProduct>& pairing) {
  if (flavor_of(target) != s.maps().flavor())
    throw Error(variant_name(target) + " is not a target for an " + kind_name(s.kind()) +
                " structure");
  if (s.algebra()->num_generators() != 0)
    throw Error("morphisms are built from structures over the ground field");
  if (is_cyclic(target)) {
    if (!pairing) throw Error(variant_name(target) + " needs a pairing");
    auto r = verify_cyclic(s, *pairing);
    if (!r.ok) throw Error("structure is not cyclic: " + describe(r, s));
  }
}

// Σ over placements of w_1..w_r (all orders) among x_1..x_n (order kept), Koszul signed.
TensorElement ainfty_insertions(const Cochain& m, const Tuple& w, const Tuple& x,
                                const GradedSpace& space) {
  const int r = static_cast<int>(w.size()), n = static_cast<int>(x.size());
  Tuple combined = w;
  combined.insert(combined.end(), x.begin(), x.end());
  const auto ps = parities_of(combined, space);
  TensorElement acc;
  for (const auto& pi : all_permutations(r + n)) {
    int last = r - 1;
    bool ordered = true;
    for (int p = 0; p < r + n && ordered; ++p) {
      const int src = pi.images[p];
      if (src >= r) {
        ordered = src > last;
        last = src;
      }
    }
    if (!ordered) continue;
    Tuple y(r + n);
    for (int p = 0; p < r + n; ++p) y[p] = combined[pi.images[p]];
    TensorElement v = m.value(y);
    if (v.is_zero()) continue;
    v *= koszul_sign(ps, pi);
    acc += v;
  }
  return acc;
}

}  // namespace

Cochain LInfinityMorphism::value(const Tuple& w) const {
  const GradedSpace& space = *structure.space();
  Cochain out(structure.space(), structure.algebra(), flavor_of(target));
  Tuple t = w;
  const int sign = canonicalize(t, space);
  if (sign == 0) return out;
  auto it = components.find(t);
  if (it == components.end()) return out;
  out = it->second;
  if (sign < 0) out *= -1;
  return out;
}

int LInfinityMorphism::max_r() const {
  int r = 0;
  for (const auto& [w, c] : components) r = std::max(r, static_cast<int>(w.size()));
  return r;
}

LInfinityMorphism build_f(const Structure& s, Variant target, std::optional<InnerProduct> pairing) {
  target = truncated(target);
  check_target(s, target, pairing);
  if (!is_cyclic(target)) pairing.reset();
  const GradedSpace& space = *s.space();
  const Flavor flavor = flavor_of(target);
  const Cochain& m = s.maps();
  const int k = s.max_arity();
  LInfinityMorphism f{s, target, pairing, {}};
  for (int r = 1; r < k; ++r) {
    for (const Tuple& w : basis_tuples(space, Flavor::Symmetric, r)) {
      Cochain value(s.space(), s.algebra(), flavor);
      for (int n = 1; r + n <= k; ++n) {
        for (const Tuple& x : basis_tuples(space, flavor, n)) {
          TensorElement v;
          if (s.kind() == Kind::LInfinity) {
            Tuple y = w;
            y.insert(y.end(), x.begin(), x.end());
            v = m.value(y);
          } else {
            v = ainfty_insertions(m, w, x, space);
          }
          if (!v.is_zero()) value.add(x, v);
        }
      }
      if (value.is_zero()) continue;
      if (pairing && !(project_cyclic(*pairing, value) == value)) f.values_cyclic = false;
      f.components.emplace(w, std::move(value));
    }
  }
  return f;
}

Cochain pushforward_components(const std::map<Tuple, Cochain>& components, const SpacePtr& space_ptr,
                               Flavor flavor, const TensorElement& xi, const AlgebraPtr& alg) {
  const GradedSpace& space = *space_ptr;
  const CoefficientAlgebra& A = *alg;
  const auto coeff = coefficients(xi, space.dim());
  const int dim = static_cast<int>(space.dim());
  int max_r = 0;
  for (const auto& [w, c] : components) max_r = std::max(max_r, static_cast<int>(w.size()));
  Cochain out(space_ptr, alg, flavor);

  // ordered label sequences J with the running product ξ^{j_1}⋯ξ^{j_r}
  std::vector<std::pair<Tuple, Terms>> level{{Tuple{}, Terms{{A.unit(), Rational(1)}}}};
  for (int r = 1; r <= max_r; ++r) {
    std::vector<std::pair<Tuple, Terms>> next;
    for (const auto& [J, prod] : level)
      for (int j = 0; j < dim; ++j) {
        if (coeff[j].empty()) continue;
        Terms p = A.multiply(prod, coeff[j]);
        if (p.empty()) continue;
        Tuple J2 = J;
        J2.push_back(j);
        next.emplace_back(std::move(J2), std::move(p));
      }
    level = std::move(next);
    const Rational weight = Rational(1) / factorial(r);
    for (const auto& [J, prod] : level) {
      Tuple key = J;
      const int sign = canonicalize(key, space);
      if (sign == 0) continue;
      auto it = components.find(key);
      if (it == components.end()) continue;
      Cochain term = tensor_with(it->second, prod, alg);
      term *= weight * sign * letter_sign(J, space);
      out += term;
    }
  }
  return out;
}

Cochain pushforward(const LInfinityMorphism& f, const TensorElement& xi, const AlgebraPtr& alg) {
  check_candidate(f.structure, xi, alg);
  return pushforward_components(f.components, f.structure.space(), flavor_of(f.target), xi, alg);
}

Cochain twist_difference(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg) {
  Cochain out = twist_unchecked(s, xi, alg).maps();
  out -= over(s, alg).maps();
  return out.without_arity(0);
}

std::string first_difference(const Cochain& a, const Cochain& b) {
  const Cochain diff = a - b;
  if (diff.is_zero()) return "";
  const Tuple* first = nullptr;
  for (const auto& [t, v] : diff.entries())
    if (!first || tuple_less(t, *first)) first = &t;
  const GradedSpace& space = *a.space();
  const CoefficientAlgebra& alg = *a.algebra();
  std::ostringstream os;
  os << "at " << format_tuple(*first, space) << ": " << format(a.value(*first), space, alg)
     << " vs " << format(b.value(*first), space, alg);
  return os.str();
}

TestPair universal_pair(const Structure& s, int order) {
  UniversalAlgebra u = universal_algebra(s, order);
  return {"universal(order " + std::to_string(order) + ")", u.algebra, u.canonical};
}

MorphismReport verify_morphism(const LInfinityMorphism& f, const std::vector<TestPair>& battery,
                               int truncation) {
  MorphismReport report;
  const ComplexSpec spec = make_complex(f.target, f.structure, f.pairing, truncation);
  for (const auto& pair : battery) {
    PairResult r;
    r.name = pair.name;
    r.is_mc = is_mc(f.structure, pair.xi, pair.algebra);
    const Cochain pf = restrict(spec, pushforward(f, pair.xi, pair.algebra));
    const Cochain td = restrict(spec, twist_difference(f.structure, pair.xi, pair.algebra));
    r.discrepancy = first_difference(pf, td);
    r.pushforward_matches = r.discrepancy.empty();
    r.target_mc = dgla_mc_defect(spec, pf).is_zero();
    if (f.pairing) r.cyclic = project_cyclic(*f.pairing, pf) == pf;
    if (!r.ok()) report.ok = false;
    report.pairs.push_back(std::move(r));
  }
  if (!f.values_cyclic) report.ok = false;
  return report;
}

std::string describe(const MorphismReport& r) {
  std::ostringstream os;
  for (const auto& p : r.pairs) {
    os << p.name << ": " << (p.ok() ? "pass" : "FAIL") << " (mc " << (p.is_mc ? "yes" : "no")
       << ", pushforward " << (p.pushforward_matches ? "= m^xi - m" : "differs") << ", target mc "
       << (p.target_mc ? "yes" : "no");
    if (!p.cyclic) os << ", not cyclic";
    os << ")";
    if (!p.discrepancy.empty()) os << " " << p.discrepancy;
    os << "\n";
  }
  return os.str();
}

CompatibilityReport compatibility_square(const Structure& s) {
  if (s.kind() != Kind::AInfinity) throw Error("compatibility square needs an A-infinity structure");
  const LInfinityMorphism hoch = build_f(s, Variant::Hoch_trunc);
  const LInfinityMorphism ce = build_f(symmetrize_to_linfty(s), Variant::CE_trunc);
  CompatibilityReport r;
  std::set<Tuple> keys;
  for (const auto& [w, c] : hoch.components) keys.insert(w);
  for (const auto& [w, c] : ce.components) keys.insert(w);
  for (const Tuple& w : keys) {
    const Cochain lhs = ce.value(w);
    const Cochain rhs = symmetrize_cochain(hoch.value(w));
    r.entries += static_cast<int>(lhs.entries().size());
    const std::string diff = first_difference(lhs, rhs);
    if (!diff.empty() && r.ok) {
      r.ok = false;
      r.discrepancy = "f" + format_tuple(w, *s.space()) + " " + diff;
    }
  }
  return r;
}

CurvedMorphism build_chi(const Structure& s, Variant target, std::optional<InnerProduct> pairing) {
  if (s.curved()) throw Error("curved structures have no truncated target");
  CurvedMorphism chi{build_f(s, target, std::move(pairing)), std::nullopt};
  Cochain m0 = s.maps();
  if (flavor_of(chi.f.target) != m0.flavor()) throw Error("target flavor mismatch");
  chi.chi0 = std::move(m0);
  return chi;
}

ChiReport verify_chi_chain_map(const CurvedMorphism& chi, int weight, int truncation) {
  const Structure& s = chi.f.structure;
  const GradedSpace& space = *s.space();
  auto chi_of = [&](const Tuple& u) -> Cochain {
    if (!u.empty()) return chi.f.value(u);
    if (chi.chi0) return *chi.chi0;
    return Cochain(s.space(), s.algebra(), flavor_of(chi.f.target));
  };
  auto cut = [&](Cochain c) { return c.truncated(truncation).without_arity(0); };
  auto l2 = [&](const Cochain& a, const Cochain& b) {
    Cochain out(s.space(), s.algebra(), flavor_of(chi.f.target));
    const auto parts = split_parity(a);
    for (int p = 0; p < 2; ++p) {
      if (parts[p].is_zero()) continue;
      Cochain t = bracket(parts[p], b, truncation);
      if (p == 1) t *= -1;
      out += t;
    }
    return out;
  };

  ChiReport r;
  for (int n = 0; n <= weight; ++n) {
    for (const Tuple& w : basis_tuples(space, Flavor::Symmetric, n)) {
      ++r.words;
      Cochain lhs(s.space(), s.algebra(), flavor_of(chi.f.target));
      const ChainElement dw = chain_coalgebra_differential(s, ChainElement::word(w, space));
      for (const auto& [u, c] : dw.terms()) lhs += c * chi_of(u);
      Cochain rhs(s.space(), s.algebra(), flavor_of(chi.f.target));
      const auto ps = parities_of(w, space);
      for (int p = 0; p <= n; ++p)
        for (const auto& sigma : unshuffles(p, n - p)) {
          Tuple I, J;
          for (int i = 0; i < p; ++i) I.push_back(w[sigma.images[i]]);
          for (int i = p; i < n; ++i) J.push_back(w[sigma.images[i]]);
          const Cochain a = chi_of(I), b = chi_of(J);
          if (a.is_zero() || b.is_zero()) continue;
          Cochain t = l2(a, b);
          t *= Rational(koszul_sign(ps, sigma), 2);
          rhs += t;
        }
      const std::string diff = first_difference(cut(lhs), cut(rhs));
      if (!diff.empty() && r.ok) {
        r.ok = false;
        r.word = w;
        r.defect = diff;
      }
    }
  }
  return r;
}

std::string describe(const ChiReport& r, const GradedSpace& space) {
  std::ostringstream os;
  if (r.ok) {
    os << "chain map on " << r.words << " words";
  } else {
    os << "not a chain map on word ";
    if (r.word.empty()) {
      os << "1";
    } else {
      for (std::size_t i = 0; i < r.word.size(); ++i) os << (i ? "." : "") << space.label(r.word[i]);
    }
    os << " " << r.defect;
  }
  return os.str();
}

}  // namespace linf
