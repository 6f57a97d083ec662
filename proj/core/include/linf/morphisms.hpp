#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linf/complexes.hpp"
#include "linf/mc.hpp"

namespace linf {

// f_r : (ΠV)^{⊗r} → Π(target), graded-symmetric and even, into a truncated
// derivation complex. Components are stored on sorted w-tuples.
struct LInfinityMorphism {
  Structure structure;  // the structure the tables are built from
  Variant target;       // one of the truncated variants
  std::optional<InnerProduct> pairing;
  std::map<Tuple, Cochain> components;
  bool values_cyclic = true;  // every value fixed by project_cyclic (cyclic targets)

  // f_r(w_1,…,w_r) for any ordering of the labels.
  Cochain value(const Tuple& w) const;
  int max_r() const;
};

// f_r(w)(x) = m_{r+n}(w, x) for L∞; for A∞ the sum over σ ∈ S_r and over
// shuffles of σ(w) with x, without a 1/r! factor. Cyclic targets require a
// pairing for which m is cyclic; their values are checked against project_cyclic.
LInfinityMorphism build_f(const Structure& s, Variant target,
                          std::optional<InnerProduct> pairing = std::nullopt);

// Σ_{r≥1} (1/r!) f_r(ξ,…,ξ) as a cochain over A (arities ≥ 1).
Cochain pushforward(const LInfinityMorphism& f, const TensorElement& xi, const AlgebraPtr& alg);

// Same sum for any family of symmetric components stored on sorted w-tuples, with
// values over an algebra whose generators lead those of `alg`.
Cochain pushforward_components(const std::map<Tuple, Cochain>& components, const SpacePtr& space,
                               Flavor flavor, const TensorElement& xi, const AlgebraPtr& alg);

// m^ξ − m on arities ≥ 1, computed by inserting ξ into m directly.
Cochain twist_difference(const Structure& s, const TensorElement& xi, const AlgebraPtr& alg);

// First entry where two cochains differ, formatted; empty if equal.
std::string first_difference(const Cochain& a, const Cochain& b);

struct TestPair {
  std::string name;
  AlgebraPtr algebra;
  TensorElement xi;
};

// Order-N quotient of the universal algebra with its canonical element.
TestPair universal_pair(const Structure& s, int order);

struct PairResult {
  std::string name;
  bool is_mc = false;
  bool pushforward_matches = false;
  bool target_mc = false;  // MC in the target ⊗ A (only required when is_mc)
  bool cyclic = true;      // pushforward fixed by project_cyclic (cyclic targets)
  std::string discrepancy;
  bool ok() const { return pushforward_matches && (!is_mc || target_mc) && cyclic; }
};

struct MorphismReport {
  bool ok = true;
  std::vector<PairResult> pairs;
};

MorphismReport verify_morphism(const LInfinityMorphism& f, const std::vector<TestPair>& battery,
                               int truncation);
std::string describe(const MorphismReport& r);

// For A∞ structures: f built from the symmetrized structure into CE equals the
// Hochschild f followed by the symmetrization of cochains.
struct CompatibilityReport {
  bool ok = true;
  int entries = 0;
  std::string discrepancy;
};
CompatibilityReport compatibility_square(const Structure& s);

// χ_0 = m and χ_r = f_r for r ≥ 1, into the derivation Lie algebra with zero differential.
struct CurvedMorphism {
  LInfinityMorphism f;
  std::optional<Cochain> chi0;
};
CurvedMorphism build_chi(const Structure& s, Variant target,
                         std::optional<InnerProduct> pairing = std::nullopt);

struct ChiReport {
  bool ok = true;
  int words = 0;
  Tuple word;  // first failing word
  std::string defect;
};
// Checks π_1 χ d = π_1 d χ on every sorted word of weight ≤ W, with the target
// bracket l_2(Πa, Πb) = (−1)^{|a|}[a, b] cut at arity `truncation`.
ChiReport verify_chi_chain_map(const CurvedMorphism& chi, int weight, int truncation);
std::string describe(const ChiReport& r, const GradedSpace& space);

}  // namespace linf
