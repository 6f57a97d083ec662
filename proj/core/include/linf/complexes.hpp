#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linf/structure.hpp"

namespace linf {

enum class Variant {
  CE,
  CE_trunc,
  Hoch,
  Hoch_trunc,
  CycCE,
  CycCE_trunc,
  CycHoch,
  CycHoch_trunc
};

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);
bool is_truncated(Variant v);
bool is_cyclic(Variant v);
Flavor flavor_of(Variant v);
Variant truncated(Variant v);

struct ComplexSpec {
  Variant variant;
  Structure structure;
  std::optional<InnerProduct> pairing;
  int truncation;

  int min_arity() const { return is_truncated(variant) ? 1 : 0; }
  Flavor flavor() const { return flavor_of(variant); }
};

// Validates flavor, pairing and curvature constraints.
ComplexSpec make_complex(Variant variant, const Structure& s,
                         std::optional<InnerProduct> pairing, int truncation);

// Drops arities outside [min_arity, truncation].
Cochain restrict(const ComplexSpec& spec, const Cochain& a);
// [a, b] in the arity quotient.
Cochain bracket(const ComplexSpec& spec, const Cochain& a, const Cochain& b);
// d(a) = [a, m].
Cochain differential(const ComplexSpec& spec, const Cochain& a);
// Dτ + [τ, m] + ½[τ, τ] for τ over a coefficient algebra.
Cochain dgla_mc_defect(const ComplexSpec& spec, const Cochain& tau);

// Projection onto cochains whose (n+1)-linear forms ⟨c(x_1..x_n), x_{n+1}⟩ are
// cyclically invariant (symmetric flavor: invariant under all of S_{n+1}).
Cochain project_cyclic(const InnerProduct& g, const Cochain& a);
Cochain project_cyclic(const ComplexSpec& spec, const Cochain& a);

struct BettiRow {
  int arity;
  int dim_even, dim_odd;
  int betti_even, betti_odd;
  bool reliable;
};

struct BettiTable {
  std::string variant;
  int truncation = 0;
  int min_arity = 0;
  // Differential raises arity by exactly `step` when homogeneous.
  bool homogeneous = true;
  int step = 0;
  std::vector<BettiRow> rows;  // homogeneous case only
  int total_even = 0, total_odd = 0;
  int reliable_top = 0;  // largest arity whose differential lands inside the window
};

BettiTable homology(const ComplexSpec& spec);
std::string format_betti(const BettiTable& t);

// Symmetric words in ΠV: sorted tuples with Koszul normal-ordering signs.
class ChainElement {
 public:
  ChainElement() = default;
  static ChainElement word(Tuple letters, const GradedSpace& space);

  void add(const Tuple& sorted_word, const Rational& c);
  bool is_zero() const { return terms_.empty(); }
  int max_weight() const;
  const std::map<Tuple, Rational>& terms() const { return terms_; }

  ChainElement& operator+=(const ChainElement& o);
  ChainElement& operator*=(const Rational& c);
  friend bool operator==(const ChainElement& a, const ChainElement& b) {
    return a.terms_ == b.terms_;
  }

 private:
  std::map<Tuple, Rational> terms_;
};

std::string format(const ChainElement& e, const GradedSpace& space);

// d(x_1⋯x_n) = Σ_{i≥1} Σ_{(i,n−i)-unshuffles} ε m_i(x_I)·x_J; A∞ structures use m̄.
ChainElement chain_coalgebra_differential(const Structure& s, const ChainElement& e);

}  // namespace linf
