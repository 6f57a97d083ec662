#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linf/morphisms.hpp"

namespace linf {

// k[z, dz] ⊗ base with polynomial degree bounded by `degree`; z and dz are the
// first two generators, followed by those of the base.
struct Interval {
  AlgebraPtr base;
  AlgebraPtr algebra;
  static constexpr int z = 0, dz = 1, offset = 2;
};
Interval make_interval(const AlgebraPtr& base, int degree);

// Interpolated cochains are cochains over Interval::algebra.
Cochain lift(const Interval& I, const Cochain& c);              // constant in z
TensorElement lift(const Interval& I, const TensorElement& t);
Cochain times_z(const Interval& I, const Cochain& c, int power);  // c·z^power
Cochain times_dz(const Interval& I, const Cochain& c);            // c·dz
Cochain dz_left(const Interval& I, const Cochain& c);             // dz·c
Cochain evaluate_at(const Interval& I, const Cochain& h, const Rational& z0);
// ∫₀¹ R(z) for h = P(z) + R(z)·dz.
Cochain integrate(const Interval& I, const Cochain& h);

// CE̅ ⊂ CE for L∞ structures, Hoch̅ ⊂ Hoch for A∞ structures, cut at one truncation.
struct FiberContext {
  ComplexSpec sub;   // truncated variant
  ComplexSpec full;  // untruncated variant
  Interval interval;
};
FiberContext make_fiber_context(const Structure& s, int truncation, int degree = 0);

// (a, r) ∈ g ⊕ Πh; r is stored unshifted, so the element has the parity of a and |r| + 1.
struct ConeElement {
  Cochain a;
  Cochain r;
};
// (a, H) with H an interpolated cochain, H(0) = 0 and H(1) = a.
struct FiberElement {
  Cochain a;
  Cochain h;
};

// d(a, r) = (∂a, −∂r + a), ∂ = [−, m].
ConeElement cone_differential(const FiberContext& ctx, const ConeElement& e);
// d H = [H, m] − (−1)^{|H|} D H with D the differential of the coefficients; the sign
// turns the right derivation [−, m] and the left derivation D into a square-zero sum.
Cochain interpolated_differential(const FiberContext& ctx, const Cochain& h);
// (∂a, d H).
FiberElement fiber_differential(const FiberContext& ctx, const FiberElement& e);
// Empty when the endpoint constraints hold, else a description.
std::string fiber_constraint_violation(const FiberContext& ctx, const FiberElement& e);

// i(a, r) = (a, z·a − r·dz), π(a, P + R·dz) = (a, −∫₀¹ R); the signs realize the
// shift Πh with the differential above.
FiberElement retraction_i(const FiberContext& ctx, const ConeElement& e);
ConeElement retraction_pi(const FiberContext& ctx, const FiberElement& e);

bool operator==(const ConeElement& x, const ConeElement& y);
bool operator==(const FiberElement& x, const FiberElement& y);

// ŵ: the arity-0 cochain with value w.
Cochain constant_cochain(const Structure& s, int label, Flavor flavor);

// s_r(w) = z^r f_r(w) + (z^r − z)·f_r(w)_0, plus dz·ŵ for r = 1, where f_r(w)_0 is the
// arity-0 cochain with value m_r(w) (the sum over orderings of w for A∞).
struct Nullhomotopy {
  LInfinityMorphism f;
  Interval interval;
  std::map<Tuple, Cochain> components;
  Cochain value(const Tuple& w) const;
};
Nullhomotopy nullhomotopy_s(const Structure& s, int truncation);

// Σ_{r≥1} (1/r!) s_r(ξ,…,ξ) over base ⊗ k[z, dz], ξ over the base.
Cochain pushforward(const Nullhomotopy& s, const TensorElement& xi, const Interval& I);

// α_z = e^{zξ} m e^{−zξ} with the de Rham term, for the canonical element of the
// order-N universal algebra.
struct AlphaReport {
  bool mc = false;         // α_z − m is MC in CE ⊗ U[z, dz], every z-coefficient
  bool relations = false;  // α_z satisfies the relations over U[z, dz]
  bool endpoint0 = false;  // α_0 = m
  bool endpoint1 = false;  // α_1 − m = pushforward of f
  bool matches_s = false;  // α_z − m = pushforward of s
  std::string detail;
  bool ok() const { return mc && relations && endpoint0 && endpoint1 && matches_s; }
};
AlphaReport check_alpha(const Structure& s, int order, int truncation);

struct ParityBetti {
  int even = 0, odd = 0;
  friend bool operator==(const ParityBetti&, const ParityBetti&) = default;
};
// Homology of (ΠV, m_1).
ParityBetti linear_homology(const Structure& s);
// Homology of the cone C_g of CE̅ → CE at the context's truncation.
ParityBetti cone_homology(const FiberContext& ctx);

struct FiberReport {
  int truncation = 0;
  ParityBetti source;  // ΠV with m_1
  ParityBetti cone;    // C_g; compared with the parities of V = Π(ΠV)
  bool betti_match = false;
  bool h_chain_map = false;        // h(w) = (f_1(w), −(−1)^{|w|} ŵ), d h(w) = −(−1)^{|w|} h(m_1 w)
  bool pi_s1 = false;              // π s̃_1(w) = h(w)
  bool s1_chain_map = false;       // d s̃_1(w) = −(−1)^{|w|} s̃_1(m_1 w)
  bool s1_in_fiber = false;        // s̃_1(w) satisfies the endpoint constraints
  std::string detail;
  bool ok() const { return betti_match && h_chain_map && pi_s1 && s1_chain_map && s1_in_fiber; }
};
FiberReport certify_fiber_sequence(const Structure& s, int truncation);
std::string describe(const FiberReport& r);

// Is f = e^ξ g e^{−ξ}? f and g are structures over A (g's maps may be over the ground
// field). On success the family e^{zξ} g e^{−zξ} + ξ dz is checked at both ends.
struct GaugeReport {
  bool ok = false;
  bool family_relations = false;
  bool endpoints = false;
  std::string detail;
  std::optional<Cochain> family;
};
GaugeReport gauge_homotopy_check(const Structure& f, const Structure& g, const TensorElement& xi,
                                 const AlgebraPtr& alg);

}  // namespace linf
