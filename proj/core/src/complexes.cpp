#include "linf/complexes.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace linf {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::CE: return "CE";
    case Variant::CE_trunc: return "CE_trunc";
    case Variant::Hoch: return "Hoch";
    case Variant::Hoch_trunc: return "Hoch_trunc";
    case Variant::CycCE: return "CycCE";
    case Variant::CycCE_trunc: return "CycCE_trunc";
    case Variant::CycHoch: return "CycHoch";
    case Variant::CycHoch_trunc: return "CycHoch_trunc";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::CE, Variant::CE_trunc, Variant::Hoch, Variant::Hoch_trunc,
                    Variant::CycCE, Variant::CycCE_trunc, Variant::CycHoch, Variant::CycHoch_trunc})
    if (variant_name(v) == name) return v;
  throw Error("unknown complex variant '" + name + "'");
}

bool is_truncated(Variant v) {
  return v == Variant::CE_trunc || v == Variant::Hoch_trunc || v == Variant::CycCE_trunc ||
         v == Variant::CycHoch_trunc;
}

bool is_cyclic(Variant v) {
  return v == Variant::CycCE || v == Variant::CycCE_trunc || v == Variant::CycHoch ||
         v == Variant::CycHoch_trunc;
}

Flavor flavor_of(Variant v) {
  return (v == Variant::CE || v == Variant::CE_trunc || v == Variant::CycCE ||
          v == Variant::CycCE_trunc)
             ? Flavor::Symmetric
             : Flavor::Tensor;
}

Variant truncated(Variant v) {
  switch (v) {
    case Variant::CE: return Variant::CE_trunc;
    case Variant::Hoch: return Variant::Hoch_trunc;
    case Variant::CycCE: return Variant::CycCE_trunc;
    case Variant::CycHoch: return Variant::CycHoch_trunc;
    default: return v;
  }
}

ComplexSpec make_complex(Variant variant, const Structure& s, std::optional<InnerProduct> pairing,
                         int truncation) {
  if (truncation < 1) throw Error("truncation order must be at least 1");
  if (flavor_of(variant) != s.maps().flavor())
    throw Error(variant_name(variant) + " needs an " +
                (flavor_of(variant) == Flavor::Symmetric ? std::string("L-infinity")
                                                         : std::string("A-infinity")) +
                " structure");
  if (s.curved() && is_truncated(variant))
    throw Error("curved structures have no truncated complex");
  if (is_cyclic(variant)) {
    if (!pairing) throw Error(variant_name(variant) + " needs a pairing");
    auto r = verify_cyclic(s, *pairing);
    if (!r.ok) throw Error("structure is not cyclic: " + describe(r, s));
  } else {
    pairing.reset();
  }
  return ComplexSpec{variant, s, std::move(pairing), truncation};
}

Cochain restrict(const ComplexSpec& spec, const Cochain& a) {
  Cochain out = a.truncated(spec.truncation);
  if (spec.min_arity() > 0) out = out.without_arity(0);
  return out;
}

Cochain bracket(const ComplexSpec& spec, const Cochain& a, const Cochain& b) {
  return restrict(spec, bracket(a, b, spec.truncation));
}

Cochain differential(const ComplexSpec& spec, const Cochain& a) {
  Structure sa = spec.structure;
  if (!same_algebra(a.algebra(), sa.algebra()))
    sa = Structure(sa.kind(), extend_scalars(sa.maps(), a.algebra()));
  return restrict(spec, bracket(a, sa.maps(), spec.truncation));
}

Cochain dgla_mc_defect(const ComplexSpec& spec, const Cochain& tau) {
  Cochain out = apply_d(restrict(spec, tau)) + differential(spec, tau);
  Cochain sq = bracket(spec, tau, tau);
  sq *= Rational(1, 2);
  out += sq;
  return restrict(spec, out);
}

namespace {

std::vector<Parity> parities_of(const Tuple& t, const GradedSpace& space) {
  std::vector<Parity> ps;
  for (int i : t) ps.push_back(space.parity(i));
  return ps;
}

// Cyclic rotations R^r as permutations: position 0 receives x_{n−r}, etc.
std::vector<Permutation> rotations(int size) {
  std::vector<Permutation> out;
  for (int r = 0; r < size; ++r) {
    Permutation p;
    for (int i = 0; i < size; ++i) p.images.push_back((i - r + size) % size);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

Cochain project_cyclic(const InnerProduct& g, const Cochain& a) {
  const GradedSpace& space = *a.space();
  const CoefficientAlgebra& alg = *a.algebra();
  if (!(*g.space() == space)) throw Error("pairing is declared on a different space");
  const int dim = static_cast<int>(space.dim());
  Cochain out(a.space(), a.algebra(), a.flavor());
  for (int n : a.arities()) {
    if (n == 0) {
      out += a.component(0);
      continue;
    }
    const auto group =
        a.flavor() == Flavor::Symmetric ? all_permutations(n + 1) : rotations(n + 1);
    const Rational norm = Rational(1) / static_cast<long>(group.size());
    for (const Tuple& x : basis_tuples(space, a.flavor(), n)) {
      // averaged form ω'(x, e_l) for every l
      std::vector<Terms> omega(dim);
      for (int l = 0; l < dim; ++l) {
        Tuple y = x;
        y.push_back(l);
        const auto ps = parities_of(y, space);
        Terms acc;
        for (const auto& sigma : group) {
          Tuple z(n + 1);
          for (int i = 0; i <= n; ++i) z[i] = y[sigma.images[i]];
          Terms w = pairing_form(a, g, z);
          if (w.empty()) continue;
          acc += scaled(std::move(w), koszul_sign(ps, sigma) * norm);
        }
        omega[l] = std::move(acc);
      }
      // back to a cochain: β_j[μ] = Σ_l (G^{-1})_{lj} (−1)^{|μ||e_l|} ω'(x, e_l)[μ]
      TensorElement value;
      for (int l = 0; l < dim; ++l)
        for (const auto& [mu, c] : omega[l]) {
          const Rational r =
              (alg.parity(mu).is_odd() && space.parity(l).is_odd()) ? Rational(-c) : c;
          for (int j = 0; j < dim; ++j) {
            const Rational& gi = g.inverse()[l][j];
            if (gi != 0) value.add(j, mu, r * gi);
          }
        }
      if (!value.is_zero()) out.add(x, value);
    }
  }
  return out;
}

Cochain project_cyclic(const ComplexSpec& spec, const Cochain& a) {
  if (!spec.pairing) throw Error("project_cyclic needs a pairing");
  return project_cyclic(*spec.pairing, a);
}

namespace {

struct Basis {
  std::vector<std::pair<Tuple, int>> cells;
  std::map<std::pair<Tuple, int>, int> index;
};

Parity cell_parity(const std::pair<Tuple, int>& cell, const GradedSpace& space) {
  Parity p = space.parity(cell.second);
  for (int i : cell.first) p += space.parity(i);
  return p;
}

SparseRow to_row(const Cochain& c, const Basis& b) {
  SparseRow row;
  for (const auto& [t, v] : c.entries())
    for (const auto& [k, x] : v) {
      auto it = b.index.find({t, k.basis});
      if (it == b.index.end()) throw Error("cochain outside the complex basis");
      row[it->second] += x;
    }
  for (auto it = row.begin(); it != row.end();) {
    if (it->second == 0) it = row.erase(it);
    else ++it;
  }
  return row;
}

}  // namespace

BettiTable homology(const ComplexSpec& spec) {
  const Structure& s = spec.structure;
  if (s.algebra()->num_generators() != 0) throw Error("homology needs a structure over the ground field");
  const GradedSpace& space = *s.space();
  const int N = spec.truncation, lo = spec.min_arity();
  BettiTable t;
  t.variant = variant_name(spec.variant);
  t.truncation = N;
  t.min_arity = lo;

  const auto m_ar = s.maps().arities();
  t.homogeneous = m_ar.size() <= 1;
  t.step = m_ar.empty() ? 0 : m_ar.front() - 1;
  const int kmax = m_ar.empty() ? 1 : m_ar.back();
  t.reliable_top = t.homogeneous ? N - std::abs(t.step) : N - std::max(0, kmax - 1);

  Basis basis;
  for (int n = lo; n <= N; ++n)
    for (const Tuple& x : basis_tuples(space, spec.flavor(), n))
      for (int j = 0; j < static_cast<int>(space.dim()); ++j) {
        basis.index[{x, j}] = static_cast<int>(basis.cells.size());
        basis.cells.push_back({x, j});
      }

  // spanning set per (arity, parity) and its image under d
  struct Group {
    std::vector<SparseRow> span, image;
  };
  std::map<std::pair<int, int>, Group> groups;
  for (const auto& cell : basis.cells) {
    Cochain e(s.space(), s.algebra(), spec.flavor());
    e.add(cell.first, Vector::basis(cell.second));
    if (is_cyclic(spec.variant)) e = project_cyclic(spec, e);
    if (e.is_zero()) continue;
    auto& g = groups[{static_cast<int>(cell.first.size()), cell_parity(cell, space).bit}];
    g.span.push_back(to_row(e, basis));
    Cochain de = differential(spec, e);
    if (!de.is_zero()) g.image.push_back(to_row(de, basis));
  }

  auto dim_of = [&](int n, int p) -> int {
    auto it = groups.find({n, p});
    return it == groups.end() ? 0 : static_cast<int>(rank(it->second.span));
  };
  auto rank_of = [&](int n, int p) -> int {
    auto it = groups.find({n, p});
    return it == groups.end() ? 0 : static_cast<int>(rank(it->second.image));
  };

  if (t.homogeneous) {
    for (int n = lo; n <= N; ++n) {
      BettiRow row{n, dim_of(n, 0), dim_of(n, 1), 0, 0, n + std::abs(t.step) <= N};
      for (int p = 0; p < 2; ++p) {
        const int src = n - t.step;  // arity feeding into n
        int in = 0;
        if (src >= lo && src <= N) in = rank_of(src, 1 - p);
        const int b = (p == 0 ? row.dim_even : row.dim_odd) - rank_of(n, p) - in;
        (p == 0 ? row.betti_even : row.betti_odd) = b;
      }
      t.total_even += row.betti_even;
      t.total_odd += row.betti_odd;
      t.rows.push_back(row);
    }
  } else {
    for (int p = 0; p < 2; ++p) {
      std::vector<SparseRow> span, img_p, img_q;
      for (auto& [key, g] : groups) {
        if (key.second == p) {
          span.insert(span.end(), g.span.begin(), g.span.end());
          img_p.insert(img_p.end(), g.image.begin(), g.image.end());
        } else {
          img_q.insert(img_q.end(), g.image.begin(), g.image.end());
        }
      }
      const int b = static_cast<int>(rank(span)) - static_cast<int>(rank(img_p)) -
                    static_cast<int>(rank(img_q));
      (p == 0 ? t.total_even : t.total_odd) = b;
    }
  }
  return t;
}

std::string format_betti(const BettiTable& t) {
  std::ostringstream os;
  os << "complex " << t.variant << " arities " << t.min_arity << ".." << t.truncation << "\n";
  if (t.homogeneous) {
    os << "differential step " << t.step << "\n";
    os << "arity  dim_even  dim_odd  betti_even  betti_odd  band\n";
    for (const auto& r : t.rows)
      os << r.arity << "  " << r.dim_even << "  " << r.dim_odd << "  " << r.betti_even << "  "
         << r.betti_odd << "  " << (r.reliable ? "reliable" : "truncation-affected") << "\n";
  } else {
    os << "differential not arity-homogeneous; totals of the quotient complex, reliable band "
       << t.min_arity << ".." << t.reliable_top << "\n";
  }
  os << "total betti_even " << t.total_even << " betti_odd " << t.total_odd << "\n";
  return os.str();
}

ChainElement ChainElement::word(Tuple letters, const GradedSpace& space) {
  ChainElement e;
  const int s = canonicalize(letters, space);
  if (s != 0) e.add(letters, s);
  return e;
}

void ChainElement::add(const Tuple& sorted_word, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(sorted_word, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int ChainElement::max_weight() const {
  int w = -1;
  for (const auto& [t, c] : terms_) w = std::max(w, static_cast<int>(t.size()));
  return w;
}

ChainElement& ChainElement::operator+=(const ChainElement& o) {
  for (const auto& [t, c] : o.terms_) add(t, c);
  return *this;
}

ChainElement& ChainElement::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [t, x] : terms_) x *= c;
  return *this;
}

std::string format(const ChainElement& e, const GradedSpace& space) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [t, c] : e.terms()) {
    Rational a = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (a != 1 || t.empty()) out += format_rational(a) + (t.empty() ? "" : " ");
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "." : "") + space.label(t[i]);
    first = false;
  }
  return out;
}

ChainElement chain_coalgebra_differential(const Structure& s, const ChainElement& e) {
  if (s.algebra()->num_generators() != 0)
    throw Error("chain coalgebra needs a structure over the ground field");
  const Structure lie = s.kind() == Kind::AInfinity ? symmetrize_to_linfty(s) : s;
  const GradedSpace& space = *s.space();
  const Cochain& m = lie.maps();
  ChainElement out;
  for (const auto& [x, c] : e.terms()) {
    const int n = static_cast<int>(x.size());
    const auto ps = parities_of(x, space);
    for (int i = 1; i <= n; ++i) {
      for (const auto& sigma : unshuffles(i, n - i)) {
        Tuple inner(i), rest;
        for (int p = 0; p < i; ++p) inner[p] = x[sigma.images[p]];
        for (int p = i; p < n; ++p) rest.push_back(x[sigma.images[p]]);
        TensorElement v = m.value(inner);
        if (v.is_zero()) continue;
        const Rational sign = c * koszul_sign(ps, sigma);
        for (const auto& [k, coeff] : v) {
          Tuple w{k.basis};
          w.insert(w.end(), rest.begin(), rest.end());
          ChainElement piece = ChainElement::word(w, space);
          piece *= sign * coeff;
          out += piece;
        }
      }
    }
  }
  return out;
}

}  // namespace linf
