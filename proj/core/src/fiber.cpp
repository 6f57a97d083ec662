#include "linf/fiber.hpp"

#include <sstream>

namespace linf {

namespace {

Monomial embed(const Monomial& m, std::size_t size, std::size_t offset) {
  Monomial out(size, 0);
  for (std::size_t i = 0; i < m.size(); ++i) out[offset + i] = m[i];
  return out;
}

Monomial base_part(const Monomial& m) {
  return Monomial(m.begin() + Interval::offset, m.end());
}

Monomial z_monomial(const Interval& I, int z, int dz) {
  Monomial m(I.algebra->num_generators(), 0);
  m[Interval::z] = static_cast<std::uint8_t>(z);
  m[Interval::dz] = static_cast<std::uint8_t>(dz);
  return m;
}

std::vector<Parity> parities_of(const Tuple& t, const GradedSpace& space) {
  std::vector<Parity> ps;
  for (int i : t) ps.push_back(space.parity(i));
  return ps;
}

Variant sub_variant(const Structure& s) {
  return s.kind() == Kind::LInfinity ? Variant::CE_trunc : Variant::Hoch_trunc;
}

Variant full_variant(const Structure& s) {
  return s.kind() == Kind::LInfinity ? Variant::CE : Variant::Hoch;
}

int default_degree(const Structure& s) { return 2 * std::max(1, s.max_arity()) + 1; }

}  // namespace

Interval make_interval(const AlgebraPtr& base, int degree) {
  Interval I;
  I.base = base;
  I.algebra = CoefficientAlgebra::tensor(CoefficientAlgebra::interval(degree, "z"), base);
  return I;
}

TensorElement lift(const Interval& I, const TensorElement& t) {
  TensorElement out;
  const std::size_t n = I.algebra->num_generators();
  for (const auto& [k, c] : t) out.add(k.basis, embed(k.mono, n, Interval::offset), c);
  return out;
}

Cochain lift(const Interval& I, const Cochain& c) {
  if (same_algebra(c.algebra(), I.algebra)) return c;
  if (!same_algebra(c.algebra(), I.base) && c.algebra()->num_generators() != 0)
    throw Error("lift: cochain is not over the base algebra");
  Cochain out(c.space(), I.algebra, c.flavor());
  for (const auto& [t, v] : c.entries()) out.add(t, lift(I, v));
  return out;
}

Cochain times_z(const Interval& I, const Cochain& c, int power) {
  Cochain lifted = lift(I, c);
  if (power == 0) return lifted;
  return tensor_with(lifted, Terms{{z_monomial(I, power, 0), Rational(1)}}, I.algebra);
}

Cochain evaluate_at(const Interval& I, const Cochain& h, const Rational& z0) {
  Cochain out(h.space(), I.base, h.flavor());
  for (const auto& [t, v] : h.entries()) {
    TensorElement e;
    for (const auto& [k, c] : v) {
      if (k.mono[Interval::dz] != 0) continue;
      Rational x = c;
      for (int i = 0; i < k.mono[Interval::z]; ++i) x *= z0;
      e.add(k.basis, base_part(k.mono), x);
    }
    if (!e.is_zero()) out.add(t, e);
  }
  return out;
}

Cochain times_dz(const Interval& I, const Cochain& c) {
  return tensor_with(lift(I, c), Terms{{z_monomial(I, 0, 1), Rational(1)}}, I.algebra);
}

Cochain integrate(const Interval& I, const Cochain& h) {
  const GradedSpace& space = *h.space();
  Cochain out(h.space(), I.base, h.flavor());
  for (const auto& [t, v] : h.entries()) {
    // the table of R·dz carries (−1)^{Σ|x|} relative to the table of R
    bool flip = false;
    for (int i : t) flip ^= space.parity(i).is_odd();
    TensorElement e;
    for (const auto& [k, c] : v) {
      if (k.mono[Interval::dz] == 0) continue;
      Rational x = c / (k.mono[Interval::z] + 1);
      if (flip) x = -x;
      e.add(k.basis, base_part(k.mono), x);
    }
    if (!e.is_zero()) out.add(t, e);
  }
  return out;
}

Cochain dz_left(const Interval& I, const Cochain& c) {
  const Cochain lifted = lift(I, c);
  Cochain out(c.space(), I.algebra, c.flavor());
  const auto parts = split_parity(lifted);
  for (int p = 0; p < 2; ++p) {
    if (parts[p].is_zero()) continue;
    // dz·c = (−1)^{|c|} c·dz
    Cochain t = times_dz(I, parts[p]);
    if (p == 1) t *= -1;
    out += t;
  }
  return out;
}

FiberContext make_fiber_context(const Structure& s, int truncation, int degree) {
  if (s.curved()) throw Error("curved structures have no truncated complex");
  if (degree <= 0) degree = default_degree(s);
  return FiberContext{make_complex(sub_variant(s), s, std::nullopt, truncation),
                      make_complex(full_variant(s), s, std::nullopt, truncation),
                      make_interval(s.algebra(), degree)};
}

ConeElement cone_differential(const FiberContext& ctx, const ConeElement& e) {
  Cochain r = differential(ctx.full, e.r);
  r *= -1;
  r += e.a;
  return {differential(ctx.sub, e.a), restrict(ctx.full, r)};
}

std::string fiber_constraint_violation(const FiberContext& ctx, const FiberElement& e) {
  const Interval& I = ctx.interval;
  const Cochain at0 = evaluate_at(I, e.h, 0);
  if (!at0.is_zero()) return "H(0) != 0 " + first_difference(at0, Cochain(at0.space(), at0.algebra(), at0.flavor()));
  const Cochain at1 = evaluate_at(I, e.h, 1);
  const Cochain a = restrict(ctx.full, e.a);
  const std::string diff = first_difference(at1, a);
  if (!diff.empty()) return "H(1) != a " + diff;
  return "";
}

Cochain interpolated_differential(const FiberContext& ctx, const Cochain& h) {
  Cochain out = differential(ctx.full, h);
  const auto parts = split_parity(h);
  for (int p = 0; p < 2; ++p) {
    if (parts[p].is_zero()) continue;
    Cochain d = apply_d(parts[p]);
    if (p == 0) d *= -1;
    out += d;
  }
  return restrict(ctx.full, out);
}

FiberElement fiber_differential(const FiberContext& ctx, const FiberElement& e) {
  const std::string bad = fiber_constraint_violation(ctx, e);
  if (!bad.empty()) throw Error("fiber element violates its constraints: " + bad);
  return {differential(ctx.sub, e.a), interpolated_differential(ctx, e.h)};
}

FiberElement retraction_i(const FiberContext& ctx, const ConeElement& e) {
  const Interval& I = ctx.interval;
  Cochain h = times_z(I, e.a, 1);
  h -= times_dz(I, e.r);
  return {e.a, restrict(ctx.full, h)};
}

ConeElement retraction_pi(const FiberContext& ctx, const FiberElement& e) {
  Cochain r = integrate(ctx.interval, e.h);
  r *= -1;
  return {e.a, restrict(ctx.full, r)};
}

bool operator==(const ConeElement& x, const ConeElement& y) { return x.a == y.a && x.r == y.r; }
bool operator==(const FiberElement& x, const FiberElement& y) { return x.a == y.a && x.h == y.h; }

Cochain constant_cochain(const Structure& s, int label, Flavor flavor) {
  Cochain c(s.space(), s.algebra(), flavor);
  c.add(Tuple{}, Vector::basis(label));
  return c;
}

Cochain Nullhomotopy::value(const Tuple& w) const {
  const GradedSpace& space = *f.structure.space();
  Cochain out(f.structure.space(), interval.algebra, flavor_of(f.target));
  Tuple t = w;
  const int sign = canonicalize(t, space);
  if (sign == 0) return out;
  auto it = components.find(t);
  if (it == components.end()) return out;
  out = it->second;
  if (sign < 0) out *= -1;
  return out;
}

Nullhomotopy nullhomotopy_s(const Structure& s, int truncation) {
  Nullhomotopy nh{build_f(s, sub_variant(s)), make_interval(s.algebra(), default_degree(s)), {}};
  const GradedSpace& space = *s.space();
  const Flavor flavor = flavor_of(nh.f.target);
  const Cochain& m = s.maps();
  for (int r = 1; r <= std::max(1, s.max_arity()); ++r) {
    for (const Tuple& w : basis_tuples(space, Flavor::Symmetric, r)) {
      Cochain v = times_z(nh.interval, nh.f.value(w).truncated(truncation), r);
      if (r >= 2) {
        // arity-0 value of f_r(w)
        TensorElement f0;
        if (s.kind() == Kind::LInfinity) {
          f0 = m.value(w);
        } else {
          const auto ps = parities_of(w, space);
          for (const auto& sigma : all_permutations(r)) {
            Tuple y(r);
            for (int i = 0; i < r; ++i) y[i] = w[sigma.images[i]];
            TensorElement x = m.value(y);
            x *= koszul_sign(ps, sigma);
            f0 += x;
          }
        }
        if (!f0.is_zero()) {
          Cochain c(s.space(), s.algebra(), flavor);
          c.add(Tuple{}, f0);
          v += times_z(nh.interval, c, r);
          v -= times_z(nh.interval, c, 1);
        }
      } else {
        v += dz_left(nh.interval, constant_cochain(s, w[0], flavor));
      }
      if (!v.is_zero()) nh.components.emplace(w, std::move(v));
    }
  }
  return nh;
}

Cochain pushforward(const Nullhomotopy& s, const TensorElement& xi, const Interval& I) {
  return pushforward_components(s.components, s.f.structure.space(), flavor_of(s.f.target),
                                lift(I, xi), I.algebra);
}

AlphaReport check_alpha(const Structure& s, int order, int truncation) {
  AlphaReport r;
  const TestPair u = universal_pair(s, order);
  const Interval I = make_interval(u.algebra, default_degree(s));
  const FiberContext ctx = make_fiber_context(s, truncation);
  const TensorElement zxi =
      right_multiply(lift(I, u.xi), Terms{{z_monomial(I, 1, 0), Rational(1)}}, *I.algebra);
  const Cochain alpha = conjugate_derivation(s, zxi, I.algebra);
  const Cochain mB = extend_scalars(s.maps(), I.algebra);
  const Cochain tau = restrict(ctx.full, alpha - mB);
  std::ostringstream detail;

  const RelationReport rel = verify(Structure(s.kind(), alpha));
  r.relations = rel.ok;
  if (!rel.ok) detail << "relations: " << describe(rel, s) << "; ";

  const Cochain defect = dgla_mc_defect(ctx.full, tau);
  r.mc = defect.is_zero();
  if (!r.mc)
    detail << "mc defect " << first_difference(defect, Cochain(defect.space(), defect.algebra(), defect.flavor())) << "; ";

  const Cochain mU = extend_scalars(s.maps(), u.algebra);
  const std::string d0 = first_difference(evaluate_at(I, alpha, 0), mU);
  r.endpoint0 = d0.empty();
  if (!r.endpoint0) detail << "z=0 " << d0 << "; ";

  const LInfinityMorphism f = build_f(s, sub_variant(s));
  const Cochain at1 = restrict(ctx.full, evaluate_at(I, alpha, 1) - mU);
  const std::string d1 = first_difference(at1, restrict(ctx.full, pushforward(f, u.xi, u.algebra)));
  r.endpoint1 = d1.empty();
  if (!r.endpoint1) detail << "z=1 " << d1 << "; ";

  const Nullhomotopy nh = nullhomotopy_s(s, truncation);
  const std::string ds = first_difference(tau, restrict(ctx.full, pushforward(nh, u.xi, I)));
  r.matches_s = ds.empty();
  if (!r.matches_s) detail << "s " << ds << "; ";
  r.detail = detail.str();
  return r;
}

namespace {

struct CellIndex {
  std::map<std::pair<Tuple, int>, int> index;
  int size = 0;
};

void add_cells(CellIndex& idx, const GradedSpace& space, Flavor flavor, int lo, int hi) {
  for (int n = lo; n <= hi; ++n)
    for (const Tuple& x : basis_tuples(space, flavor, n))
      for (int j = 0; j < static_cast<int>(space.dim()); ++j) idx.index[{x, j}] = idx.size++;
}

void append_row(SparseRow& row, const Cochain& c, const CellIndex& idx, int shift) {
  for (const auto& [t, v] : c.entries())
    for (const auto& [k, x] : v) {
      auto it = idx.index.find({t, k.basis});
      if (it == idx.index.end()) throw Error("cochain outside the cone basis");
      row[shift + it->second] += x;
    }
}

Parity cochain_cell_parity(const Tuple& t, int j, const GradedSpace& space) {
  Parity p = space.parity(j);
  for (int i : t) p += space.parity(i);
  return p;
}

ParityBetti betti_from(const std::array<std::vector<SparseRow>, 2>& images, std::array<int, 2> dims) {
  const int r0 = static_cast<int>(rank(images[0])), r1 = static_cast<int>(rank(images[1]));
  return {dims[0] - r0 - r1, dims[1] - r1 - r0};
}

}  // namespace

ParityBetti linear_homology(const Structure& s) {
  const GradedSpace& space = *s.space();
  std::array<std::vector<SparseRow>, 2> images;
  std::array<int, 2> dims{0, 0};
  for (int j = 0; j < static_cast<int>(space.dim()); ++j) {
    const int p = space.parity(j).bit;
    ++dims[p];
    SparseRow row;
    for (const auto& [k, x] : s.maps().value(Tuple{j})) row[k.basis] += x;
    if (!row.empty()) images[p].push_back(row);
  }
  return betti_from(images, dims);
}

ParityBetti cone_homology(const FiberContext& ctx) {
  const Structure& s = ctx.sub.structure;
  const GradedSpace& space = *s.space();
  const Flavor flavor = ctx.sub.flavor();
  const int N = ctx.sub.truncation;
  CellIndex sub, full;
  add_cells(sub, space, flavor, 1, N);
  add_cells(full, space, flavor, 0, N);
  std::array<std::vector<SparseRow>, 2> images;
  std::array<int, 2> dims{0, 0};
  auto image_row = [&](const ConeElement& d) {
    SparseRow row;
    append_row(row, d.a, sub, 0);
    append_row(row, d.r, full, sub.size);
    for (auto it = row.begin(); it != row.end();) {
      if (it->second == 0) it = row.erase(it);
      else ++it;
    }
    return row;
  };
  const Cochain zero(s.space(), s.algebra(), flavor);
  for (const auto& [cell, i] : sub.index) {
    Cochain a = zero;
    a.add(cell.first, Vector::basis(cell.second));
    const int p = cochain_cell_parity(cell.first, cell.second, space).bit;
    ++dims[p];
    SparseRow row = image_row(cone_differential(ctx, {a, zero}));
    if (!row.empty()) images[p].push_back(std::move(row));
  }
  for (const auto& [cell, i] : full.index) {
    Cochain r = zero;
    r.add(cell.first, Vector::basis(cell.second));
    const int p = 1 - cochain_cell_parity(cell.first, cell.second, space).bit;
    ++dims[p];
    SparseRow row = image_row(cone_differential(ctx, {zero, r}));
    if (!row.empty()) images[p].push_back(std::move(row));
  }
  return betti_from(images, dims);
}

FiberReport certify_fiber_sequence(const Structure& s, int truncation) {
  FiberReport r;
  r.truncation = truncation;
  const FiberContext ctx = make_fiber_context(s, truncation);
  const GradedSpace& space = *s.space();
  const Flavor flavor = ctx.sub.flavor();
  r.source = linear_homology(s);
  r.cone = cone_homology(ctx);
  r.betti_match = r.cone.even == r.source.odd && r.cone.odd == r.source.even;

  const Nullhomotopy nh = nullhomotopy_s(s, truncation);
  const Interval& I = nh.interval;
  const Cochain zero(s.space(), s.algebra(), flavor);
  auto f1 = [&](int j) { return restrict(ctx.sub, nh.f.value(Tuple{j})); };
  auto h_of = [&](int j) {
    Cochain w = constant_cochain(s, j, flavor);
    if (!space.parity(j).is_odd()) w *= -1;
    return ConeElement{f1(j), w};
  };
  auto s1_of = [&](int j) { return FiberElement{f1(j), restrict(ctx.full, nh.value(Tuple{j}))}; };
  // m_1(e_j) as a list of (label, coefficient)
  auto m1 = [&](int j) {
    std::vector<std::pair<int, Rational>> out;
    for (const auto& [k, x] : s.maps().value(Tuple{j})) out.emplace_back(k.basis, x);
    return out;
  };

  std::ostringstream detail;
  r.h_chain_map = r.pi_s1 = r.s1_chain_map = r.s1_in_fiber = true;
  for (int j = 0; j < static_cast<int>(space.dim()); ++j) {
    const int eps = space.parity(j).is_odd() ? 1 : -1;  // −(−1)^{|w|}
    // d h(w) = −(−1)^{|w|} h(m_1 w)
    ConeElement rhs{zero, zero};
    for (const auto& [k, x] : m1(j)) {
      ConeElement t = h_of(k);
      rhs.a += (x * eps) * t.a;
      rhs.r += (x * eps) * t.r;
    }
    const ConeElement lhs = cone_differential(ctx, h_of(j));
    if (!(lhs == ConeElement{restrict(ctx.sub, rhs.a), restrict(ctx.full, rhs.r)})) {
      if (r.h_chain_map)
        detail << "h not a chain map at " << space.label(j) << " "
               << first_difference(lhs.r, rhs.r) << first_difference(lhs.a, rhs.a) << "; ";
      r.h_chain_map = false;
    }

    const FiberElement s1 = s1_of(j);
    const std::string bad = fiber_constraint_violation(ctx, s1);
    if (!bad.empty()) {
      if (r.s1_in_fiber) detail << "s1(" << space.label(j) << ") " << bad << "; ";
      r.s1_in_fiber = false;
      continue;
    }
    const ConeElement ps = retraction_pi(ctx, s1);
    if (!(ps == h_of(j))) {
      if (r.pi_s1) detail << "pi s1(" << space.label(j) << ") != h(" << space.label(j) << "); ";
      r.pi_s1 = false;
    }
    // d s̃_1(w) = −(−1)^{|w|} s̃_1(m_1 w)
    FiberElement srhs{zero, Cochain(s.space(), I.algebra, flavor)};
    for (const auto& [k, x] : m1(j)) {
      FiberElement t = s1_of(k);
      srhs.a += (x * eps) * t.a;
      srhs.h += (x * eps) * t.h;
    }
    const FiberElement slhs = fiber_differential(ctx, s1);
    if (!(slhs.a == srhs.a && slhs.h == srhs.h)) {
      if (r.s1_chain_map)
        detail << "s1 not a chain map at " << space.label(j) << " " << first_difference(slhs.h, srhs.h)
               << first_difference(slhs.a, srhs.a) << "; ";
      r.s1_chain_map = false;
    }
  }
  r.detail = detail.str();
  return r;
}

std::string describe(const FiberReport& r) {
  std::ostringstream os;
  os << "truncation " << r.truncation << "\n";
  os << "H(PiV, m1)  even " << r.source.even << " odd " << r.source.odd << "\n";
  os << "H(C_g)      even " << r.cone.even << " odd " << r.cone.odd << " (parities of V)\n";
  auto flag = [](bool b) { return b ? "pass" : "FAIL"; };
  os << "betti match " << flag(r.betti_match) << "\n";
  os << "h chain map " << flag(r.h_chain_map) << "\n";
  os << "s1 in fiber " << flag(r.s1_in_fiber) << "\n";
  os << "pi s1 = h " << flag(r.pi_s1) << "\n";
  os << "s1 chain map " << flag(r.s1_chain_map) << "\n";
  if (!r.detail.empty()) os << "detail " << r.detail << "\n";
  return os.str();
}

GaugeReport gauge_homotopy_check(const Structure& f, const Structure& g, const TensorElement& xi,
                                 const AlgebraPtr& alg) {
  GaugeReport r;
  if (f.kind() != g.kind()) throw Error("gauge check needs structures of the same kind");
  {
    auto p = parity(xi, *g.space(), *alg);
    if (!xi.is_zero() && (!p || p->is_odd())) throw Error("gauge element must be even");
    if (touches_unit(xi, *alg)) throw Error("gauge element must be supported on A_+");
  }
  const Cochain conj = conjugate_derivation(g, xi, alg);
  const Cochain target = over(f, alg).maps();
  r.detail = first_difference(target, conj);
  r.ok = r.detail.empty();
  if (!r.ok) {
    r.detail = "f != e^xi g e^-xi " + r.detail;
    return r;
  }
  const int degree = 2 * std::max({1, f.max_arity(), g.max_arity()}) + 1;
  const Interval I = make_interval(alg, degree);
  const TensorElement zxi =
      right_multiply(lift(I, xi), Terms{{z_monomial(I, 1, 0), Rational(1)}}, *I.algebra);
  Cochain family = conjugate_derivation(g, zxi, I.algebra);
  r.family_relations = verify(Structure(g.kind(), family)).ok;
  const Cochain g_over = over(g, alg).maps();
  r.endpoints = evaluate_at(I, family, 0) == g_over && evaluate_at(I, family, 1) == conj;
  r.family = std::move(family);
  if (!r.family_relations) r.detail += "family violates the relations; ";
  if (!r.endpoints) r.detail += "family endpoints differ; ";
  r.ok = r.family_relations && r.endpoints;
  return r;
}

}  // namespace linf
