#pragma once

#include <string>
#include <vector>

#include "linf/structure.hpp"

namespace linf {

// The structure's maps as A-linear maps, i.e. tables with monomials of `alg`.
Structure over(const Structure& s, const AlgebraPtr& alg);

// Throws unless xi is even and supported on A_+.
void check_candidate(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg);

// D ξ + Σ_i c_i m_i(ξ,…,ξ), c_i = 1/i! for L∞ and 1 for A∞.
TensorElement mc_defect(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg);
bool is_mc(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg);

// m^ξ_n(x) = Σ_i c_i m_{n+i}(ξ^i, x) (L∞), or the ordered insertions (A∞), n ≥ 1.
// The MC condition is not checked.
Structure twist_unchecked(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg);
// As above but refuses non-MC input.
Structure twist(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg);

// η − ξ.
TensorElement shift_mc(const Structure& s, const TensorElement& xi, const TensorElement& eta,
                       const AlgebraPtr& alg);

// e^ξ m e^{−ξ} via substitution t ↦ t + ξ in the generating series of m; the
// arity-0 component is Σ c_i m_i(ξ^i) + D ξ. ξ only needs to be even.
Cochain conjugate_derivation(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg);

struct CyclicTwistReport {
  bool ok = true;
  std::string message;
};
CyclicTwistReport check_cyclic_twist(const Structure& s, const InnerProduct& g,
                                     const TensorElement& xi, const AlgebraPtr& alg);

// Nilpotent quotient of the completed symmetric algebra on ΠV* with the
// differential dual to m (to m̄ for A∞), and the canonical element Σ w_i ⊗ w^i.
struct UniversalAlgebra {
  AlgebraPtr algebra;
  TensorElement canonical;
};
UniversalAlgebra universal_algebra(const Structure& s, int order);
std::string dual_generator_name(const std::string& label);

struct AlgebraMapReport {
  bool ok = true;
  int order = 0;
  std::vector<Terms> images;  // φ(w^i) = ξ^i
  std::vector<Terms> square;  // d_A φ(w^i) − φ(d w^i)
  TensorElement defect;       // Σ_i (−1)^{|w_i|} w_i ⊗ square_i
};
AlgebraMapReport mc_to_algebra_map(const Structure& s, const TensorElement& xi,
                                   const AlgebraPtr& alg);

// Components ξ^i ∈ A of ξ = Σ x_i ⊗ ξ^i.
std::vector<Terms> coefficients(const TensorElement& xi, std::size_t dim);

}  // namespace linf
