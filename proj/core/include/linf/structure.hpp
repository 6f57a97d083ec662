#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linf/cochain.hpp"

namespace linf {

enum class Kind { LInfinity, AInfinity };

inline Flavor flavor_of(Kind k) { return k == Kind::LInfinity ? Flavor::Symmetric : Flavor::Tensor; }
std::string kind_name(Kind k);

// Odd structure maps m_n on ΠV (possibly A-linear), with optional curvature m_0.
class Structure {
 public:
  Structure(Kind kind, Cochain maps);

  Kind kind() const { return kind_; }
  const Cochain& maps() const { return maps_; }
  const SpacePtr& space() const { return maps_.space(); }
  const AlgebraPtr& algebra() const { return maps_.algebra(); }
  bool curved() const { return !maps_.component(0).is_zero(); }
  int max_arity() const { return maps_.max_arity(); }

  friend bool operator==(const Structure& a, const Structure& b) {
    return a.kind_ == b.kind_ && a.maps_ == b.maps_;
  }

 private:
  Kind kind_;
  Cochain maps_;
};

// Largest relation arity with nonzero compositions: 2k − 1 for top arity k.
int default_window(const Structure& s);

struct RelationReport {
  bool ok = true;
  int window = 0;
  int arity = -1;
  Tuple tuple;
  TensorElement defect;
};

// Checks m∘m + D(m) = 0 on every basis tuple of arity ≤ window.
RelationReport verify(const Structure& s, std::optional<int> window = std::nullopt);
RelationReport verify_linfty(const Structure& s, std::optional<int> window = std::nullopt);
RelationReport verify_ainfty(const Structure& s, std::optional<int> window = std::nullopt);
std::string describe(const RelationReport& r, const Structure& s);

// Pairing on the V-basis, used unchanged on ΠV.
class InnerProduct {
 public:
  InnerProduct(SpacePtr space, Matrix gram);

  const SpacePtr& space() const { return space_; }
  const Rational& operator()(int i, int j) const { return gram_[i][j]; }
  const Matrix& gram() const { return gram_; }
  const Matrix& inverse() const { return inverse_; }

 private:
  SpacePtr space_;
  Matrix gram_;
  Matrix inverse_;
};

// ⟨c(x_1..x_n), x_{n+1}⟩ extended A-bilinearly: ⟨y b, x⟩ = (−1)^{|b||x|}⟨y,x⟩ b.
Terms pairing_form(const Cochain& c, const InnerProduct& g, const Tuple& x);

struct CyclicReport {
  bool ok = true;
  int arity = -1;
  Tuple tuple;
  Terms lhs, rhs;
};

// ⟨c(x_1..x_n), x_{n+1}⟩ = ε ⟨c(x_{n+1}, x_1..x_{n−1}), x_n⟩ for all basis tuples.
CyclicReport verify_cyclic(const Cochain& c, const InnerProduct& g, int max_arity);
CyclicReport verify_cyclic(const Structure& s, const InnerProduct& g,
                           std::optional<int> max_arity = std::nullopt);
std::string describe(const CyclicReport& r, const Structure& s);

// Commutator construction: m̄_n = Σ_{σ∈S_n} ε(σ) m_n∘σ (unnormalized).
Structure symmetrize_to_linfty(const Structure& s);

// Classical data on V converted to the odd convention on ΠV.
struct ClassicalEntry {
  std::vector<std::string> args;  // V labels
  std::string value;              // linear combination of V labels
};
Structure from_classical(Kind kind, const GradedSpace& v_space,
                         const std::vector<ClassicalEntry>& differential,
                         const std::vector<ClassicalEntry>& product);

struct Preset {
  Structure structure;
  std::optional<InnerProduct> pairing;
};

Preset preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace linf
