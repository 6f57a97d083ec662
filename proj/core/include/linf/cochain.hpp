#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linf/algebra.hpp"
#include "linf/graded.hpp"

namespace linf {

struct TensorKey {
  int basis;
  Monomial mono;
  friend auto operator<=>(const TensorKey&, const TensorKey&) = default;
};

// Element of ΠV ⊗ A written as Σ c·(y ⊗ b), coefficients on the right.
class TensorElement {
 public:
  TensorElement() = default;
  static TensorElement from_vector(const Vector& v, const CoefficientAlgebra& alg);

  void add(int basis, const Monomial& mono, const Rational& c);
  void add(const TensorKey& key, const Rational& c) { add(key.basis, key.mono, c); }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coeff(const TensorKey& key) const;

  TensorElement& operator+=(const TensorElement& o);
  TensorElement& operator-=(const TensorElement& o);
  TensorElement& operator*=(const Rational& c);
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
  friend TensorElement operator*(const Rational& c, TensorElement a) { return a *= c; }
  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.terms_ == b.terms_;
  }

  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

 private:
  std::map<TensorKey, Rational> terms_;
};

std::optional<Parity> parity(const TensorElement& t, const GradedSpace& space,
                             const CoefficientAlgebra& alg);
bool touches_unit(const TensorElement& t, const CoefficientAlgebra& alg);
// (y ⊗ b)·a = y ⊗ (b a)
TensorElement right_multiply(const TensorElement& t, const Terms& a, const CoefficientAlgebra& alg);
// D(y ⊗ b) = (-1)^{|y|} y ⊗ d_A b
TensorElement apply_d(const TensorElement& t, const GradedSpace& space,
                      const CoefficientAlgebra& alg);
// Pads monomials with zero exponents for generators appended to the algebra.
TensorElement extend(const TensorElement& t, std::size_t generators);
std::string format(const TensorElement& t, const GradedSpace& space,
                   const CoefficientAlgebra& alg);

enum class Flavor { Symmetric, Tensor };

// A family c_n : (ΠV)^{⊗n} → ΠV ⊗ A extended A-multilinearly, stored on basis
// tuples. Symmetric cochains are stored on sorted tuples; arity 0 is the constant.
class Cochain {
 public:
  Cochain(SpacePtr space, AlgebraPtr algebra, Flavor flavor);

  const SpacePtr& space() const { return space_; }
  const AlgebraPtr& algebra() const { return algebra_; }
  Flavor flavor() const { return flavor_; }

  void add(Tuple tuple, const TensorElement& value);
  void add(Tuple tuple, const Vector& value);
  TensorElement value(const Tuple& tuple) const;
  const std::map<Tuple, TensorElement>& entries() const { return entries_; }

  bool is_zero() const { return entries_.empty(); }
  int max_arity() const;
  std::vector<int> arities() const;
  Cochain component(int arity) const;
  Cochain truncated(int max_arity) const;
  Cochain without_arity(int arity) const;

  Cochain& operator+=(const Cochain& o);
  Cochain& operator-=(const Cochain& o);
  Cochain& operator*=(const Rational& c);
  friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
  friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
  friend Cochain operator*(const Rational& c, Cochain a) { return a *= c; }
  friend bool operator==(const Cochain& a, const Cochain& b);

 private:
  void check_compatible(const Cochain& o) const;

  SpacePtr space_;
  AlgebraPtr algebra_;
  Flavor flavor_;
  std::map<Tuple, TensorElement> entries_;
};

// Basis tuples of the given arity: sorted without repeated odd labels for the
// symmetric flavor, all sequences for the tensor flavor.
std::vector<Tuple> basis_tuples(const GradedSpace& space, Flavor flavor, int arity);
// Ordering used for reports: by arity, then lexicographically.
bool tuple_less(const Tuple& a, const Tuple& b);

// Parity of an entry term: |y| + |b| + Σ|x_i|.
std::optional<Parity> parity(const Cochain& c);
std::array<Cochain, 2> split_parity(const Cochain& c);

TensorElement evaluate(const Cochain& c, std::span<const TensorElement> args);

// Insertion composition a∘b restricted to output arities ≤ max_arity.
Cochain compose(const Cochain& a, const Cochain& b, int max_arity);
// [a,b] = a∘b − (−1)^{|a||b|} b∘a, extended bilinearly over parity components.
Cochain bracket(const Cochain& a, const Cochain& b, int max_arity);
// D applied to every value.
Cochain apply_d(const Cochain& c);
// Table of the tensor c ⊗ a, i.e. x ↦ (−1)^{|a| Σ|x_i|} c(x)·a.
Cochain tensor_with(const Cochain& c, const Terms& a, const AlgebraPtr& target);
// Same tables with monomials padded to a larger algebra whose leading generators
// are those of c's algebra.
Cochain extend_scalars(const Cochain& c, const AlgebraPtr& target);
// Hochschild to Chevalley-Eilenberg: x ↦ Σ_{σ∈S_n} ε(σ) c(σ·x), no normalization.
Cochain symmetrize_cochain(const Cochain& c);

std::string format_tuple(const Tuple& t, const GradedSpace& space);

}  // namespace linf
