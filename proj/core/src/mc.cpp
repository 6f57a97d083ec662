#include "linf/mc.hpp"

#include <map>

namespace linf {

namespace {

Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Rational insertion_weight(Kind kind, int i) { return kind == Kind::LInfinity ? 1 / factorial(i) : Rational(1); }

TensorElement basis_element(int i, const CoefficientAlgebra& alg) {
  TensorElement t;
  t.add(i, alg.unit(), 1);
  return t;
}

}  // namespace

Structure over(const Structure& s, const AlgebraPtr& alg) {
  if (same_algebra(s.algebra(), alg)) return s;
  return Structure(s.kind(), extend_scalars(s.maps(), alg));
}

void check_candidate(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg) {
  for (const auto& [k, c] : xi) {
    if (k.basis < 0 || k.basis >= static_cast<int>(s.space()->dim()))
      throw Error("MC candidate uses a label outside the space");
    if (k.mono.size() != alg->num_generators())
      throw Error("MC candidate monomial does not belong to the coefficient algebra");
  }
  auto p = parity(xi, *s.space(), *alg);
  if (!xi.is_zero() && (!p || p->is_odd())) throw Error("MC candidate must be even");
  if (touches_unit(xi, *alg)) throw Error("MC candidate must be supported on A_+");
}

TensorElement mc_defect(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg) {
  check_candidate(s, xi, alg);
  const Structure sa = over(s, alg);
  TensorElement out = apply_d(xi, *s.space(), *alg);
  for (int i = 0; i <= sa.max_arity(); ++i) {
    std::vector<TensorElement> args(i, xi);
    TensorElement v = evaluate(sa.maps(), args);
    v *= insertion_weight(s.kind(), i);
    out += v;
  }
  return out;
}

bool is_mc(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg) {
  return mc_defect(s, xi, alg).is_zero();
}

Structure twist_unchecked(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg) {
  check_candidate(s, xi, alg);
  const Structure sa = over(s, alg);
  const GradedSpace& space = *s.space();
  const int k = sa.max_arity();
  Cochain out(s.space(), alg, sa.maps().flavor());
  std::vector<TensorElement> args;
  for (int n = 1; n <= k; ++n) {
    for (const Tuple& x : basis_tuples(space, out.flavor(), n)) {
      TensorElement acc;
      for (int i = 0; n + i <= k; ++i) {
        if (i > 0 && xi.is_zero()) break;
        if (s.kind() == Kind::LInfinity) {
          args.assign(i, xi);
          for (int j : x) args.push_back(basis_element(j, *alg));
          TensorElement v = evaluate(sa.maps(), args);
          v *= insertion_weight(s.kind(), i);
          acc += v;
        } else {
          // x_1..x_n stay in order; i copies of ξ fill the remaining slots
          const int total = n + i;
          for (const auto& sigma : unshuffles(i, n)) {
            std::vector<bool> is_xi(total, false);
            for (int p = 0; p < i; ++p) is_xi[sigma.images[p]] = true;
            args.clear();
            int next = 0;
            for (int p = 0; p < total; ++p)
              args.push_back(is_xi[p] ? xi : basis_element(x[next++], *alg));
            acc += evaluate(sa.maps(), args);
          }
        }
      }
      if (!acc.is_zero()) out.add(x, acc);
    }
  }
  return Structure(s.kind(), std::move(out));
}

Structure twist(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg) {
  TensorElement d = mc_defect(s, xi, alg);
  if (!d.is_zero())
    throw Error("twist: element is not Maurer-Cartan, defect " + format(d, *s.space(), *alg));
  return twist_unchecked(s, xi, alg);
}

TensorElement shift_mc(const Structure& s, const TensorElement& xi, const TensorElement& eta,
                       const AlgebraPtr& alg) {
  if (!is_mc(s, xi, alg)) throw Error("shift_mc: base point is not Maurer-Cartan");
  return eta - xi;
}

std::vector<Terms> coefficients(const TensorElement& xi, std::size_t dim) {
  std::vector<Terms> out(dim);
  for (const auto& [k, c] : xi) add_term(out.at(k.basis), k.mono, c);
  return out;
}

namespace {

// (−1)^{Σ_{a<b} |x_{j_a}||x_{j_b}|}: moving the formal letters t_j to the right of
// the later arguments x_j in m(x_{j_1} t_{j_1}, …).
int letter_sign(const Tuple& word, const GradedSpace& space) {
  int odd = 0;
  for (int j : word)
    if (space.parity(j).is_odd()) ++odd;
  return (odd * (odd - 1) / 2) % 2 ? -1 : 1;
}

}  // namespace

Cochain conjugate_derivation(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg) {
  {
    auto p = parity(xi, *s.space(), *alg);
    if (!xi.is_zero() && (!p || p->is_odd())) throw Error("conjugation needs an even element");
  }
  const Structure sa = over(s, alg);
  const GradedSpace& space = *s.space();
  const CoefficientAlgebra& A = *alg;
  const auto xi_j = coefficients(xi, space.dim());
  const Cochain& m = sa.maps();
  const int k = m.max_arity();

  // coefficient of each word in F(t + ξ), F(t) = Σ_L c_L m_L(v,…,v), v = Σ x_j t_j
  std::map<Tuple, TensorElement> series;
  for (int L = 0; L <= k; ++L) {
    const Rational c_L = insertion_weight(s.kind(), L);
    for (const Tuple& word : basis_tuples(space, Flavor::Tensor, L)) {
      TensorElement value = m.value(word);
      if (value.is_zero()) continue;
      value *= c_L * letter_sign(word, space);
      for (unsigned mask = 0; mask < (1u << L); ++mask) {
        Terms product{{A.unit(), Rational(1)}};
        Parity kept;
        bool negate = false, vanished = false;
        Tuple rest;
        for (int p = 0; p < L; ++p) {
          const int j = word[p];
          if (mask & (1u << p)) {
            if (xi_j[j].empty()) {
              vanished = true;
              break;
            }
            // ξ^j has the parity of x_j and moves left past the kept letters
            if (kept.is_odd() && space.parity(j).is_odd()) negate = !negate;
            product = A.multiply(product, xi_j[j]);
            if (product.empty()) {
              vanished = true;
              break;
            }
          } else {
            rest.push_back(j);
            kept += space.parity(j);
          }
        }
        if (vanished) continue;
        TensorElement term = right_multiply(value, product, A);
        if (negate) term *= -1;
        if (term.is_zero()) continue;
        series[rest] += term;
      }
    }
  }

  Cochain out(s.space(), alg, m.flavor());
  for (auto& [word, coeff] : series) {
    const int n = static_cast<int>(word.size());
    if (m.flavor() == Flavor::Symmetric) {
      Tuple sorted = word;
      if (canonicalize(sorted, space) == 0 || sorted != word) continue;
    }
    TensorElement v = coeff;
    v *= letter_sign(word, space) / insertion_weight(s.kind(), n);
    if (n == 0) v += apply_d(xi, space, A);
    out.add(word, v);
  }
  if (series.find(Tuple{}) == series.end()) out.add(Tuple{}, apply_d(xi, space, A));
  return out;
}

CyclicTwistReport check_cyclic_twist(const Structure& s, const InnerProduct& g,
                                     const TensorElement& xi, const AlgebraPtr& alg) {
  CyclicTwistReport r;
  auto base = verify_cyclic(s, g);
  if (!base.ok) throw Error("check_cyclic_twist: structure is not cyclic: " + describe(base, s));
  Structure t = twist(s, xi, alg);
  auto rep = verify_cyclic(t, g);
  r.ok = rep.ok;
  r.message = describe(rep, t);
  return r;
}

std::string dual_generator_name(const std::string& label) { return "w_" + label; }

UniversalAlgebra universal_algebra(const Structure& s, int order) {
  if (s.curved()) throw Error("curved structures have no augmented universal algebra");
  if (s.algebra()->num_generators() != 0)
    throw Error("universal algebra needs a structure over the ground field");
  const Structure lie = s.kind() == Kind::AInfinity ? symmetrize_to_linfty(s) : s;
  const GradedSpace& space = *s.space();
  const std::size_t n = space.dim();

  std::vector<CoefficientAlgebra::Generator> gens;
  for (std::size_t i = 0; i < n; ++i)
    gens.push_back({dual_generator_name(space.label(i)), space.parity(i), 0});
  std::vector<Terms> d(n);
  for (const auto& [tuple, value] : lie.maps().entries()) {
    if (static_cast<int>(tuple.size()) > order) continue;
    Monomial w(n, 0);
    Rational weight = 1;
    for (int i : tuple) ++w[i];
    for (auto e : w) weight /= factorial(e);
    weight *= letter_sign(tuple, space);
    for (const auto& [key, c] : value) {
      const int j = key.basis;
      Rational coeff = -weight * c;
      if (space.parity(j).is_odd()) coeff = -coeff;
      add_term(d[j], w, coeff);
    }
  }
  auto alg = std::make_shared<const CoefficientAlgebra>(
      std::move(gens), std::vector<CoefficientAlgebra::Block>{{order, false}}, std::move(d), true);
  TensorElement xi;
  for (std::size_t i = 0; i < n; ++i) xi.add(static_cast<int>(i), alg->generator_monomial(i), 1);
  return {alg, xi};
}

AlgebraMapReport mc_to_algebra_map(const Structure& s, const TensorElement& xi,
                                   const AlgebraPtr& alg) {
  check_candidate(s, xi, alg);
  AlgebraMapReport r;
  for (const auto& b : alg->blocks()) r.order += b.order;
  r.order = std::max(r.order, 1);
  const UniversalAlgebra u = universal_algebra(s, r.order);
  const GradedSpace& space = *s.space();
  const CoefficientAlgebra& A = *alg;
  r.images = coefficients(xi, space.dim());
  auto phi = [&](const Monomial& mono) {
    Terms out{{A.unit(), Rational(1)}};
    for (std::size_t i = 0; i < mono.size(); ++i)
      for (int e = 0; e < mono[i]; ++e) out = A.multiply(out, r.images[i]);
    return out;
  };
  for (std::size_t j = 0; j < space.dim(); ++j) {
    Terms sq = A.differentiate(r.images[j]);
    for (const auto& [mono, c] : u.algebra->generator_differential(static_cast<int>(j)))
      sq += scaled(phi(mono), -c);
    for (const auto& [mono, c] : sq) {
      r.ok = false;
      r.defect.add(static_cast<int>(j), mono, space.parity(j).is_odd() ? -c : c);
    }
    r.square.push_back(std::move(sq));
  }
  return r;
}

}  // namespace linf
