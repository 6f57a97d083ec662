#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linf/graded.hpp"

namespace linf {

// Exponent per generator, in generator order. Odd exponents are 0 or 1.
using Monomial = std::vector<std::uint8_t>;
using Terms = std::map<Monomial, Rational>;

void add_term(Terms& t, const Monomial& m, const Rational& c);
Terms& operator+=(Terms& a, const Terms& b);
Terms scaled(Terms t, const Rational& c);

class CoefficientAlgebra;
using AlgebraPtr = std::shared_ptr<const CoefficientAlgebra>;

// Finite-dimensional graded-commutative dga with monomial basis. Generators are
// grouped into blocks; words of length greater than a block's order vanish
// (nilpotent truncation), or raise an error when the block is strict.
class CoefficientAlgebra {
 public:
  struct Generator {
    std::string name;
    Parity parity;
    int block = 0;
  };
  struct Block {
    int order = 0;
    bool strict = false;
  };

  // differential[i] is d of generator i; it must lie in A_+ and be of parity |g_i|+1.
  CoefficientAlgebra(std::vector<Generator> generators, std::vector<Block> blocks,
                     std::vector<Terms> differential, bool check_square = true);

  static AlgebraPtr ground();
  static AlgebraPtr nilpotent(const std::vector<std::pair<std::string, Parity>>& generators,
                              int order,
                              const std::map<std::string, std::string>& differential = {});
  // Generators of b follow those of a; blocks are concatenated.
  static AlgebraPtr tensor(const AlgebraPtr& a, const AlgebraPtr& b);
  // k[z,dz] with words in z, dz of length ≤ max_degree + 1, so z^k dz for k ≤ max_degree;
  // a nonzero product past that raises.
  static AlgebraPtr interval(int max_degree, const std::string& z = "z");

  std::size_t num_generators() const { return generators_.size(); }
  const Generator& generator(int i) const { return generators_.at(i); }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Terms& generator_differential(int i) const { return differential_.at(i); }
  std::optional<int> find_generator(const std::string& name) const;
  // Order of the first block: the nilpotency order N of a single-block algebra.
  int order() const { return blocks_.empty() ? 0 : blocks_.front().order; }

  Monomial unit() const { return Monomial(generators_.size(), 0); }
  Monomial generator_monomial(int i) const;
  bool is_unit(const Monomial& m) const;
  Parity parity(const Monomial& m) const;
  int length(const Monomial& m) const;

  // Normal-ordered product with sign; nullopt when it vanishes.
  std::optional<std::pair<int, Monomial>> multiply(const Monomial& a, const Monomial& b) const;
  Terms multiply(const Terms& a, const Terms& b) const;
  Terms differentiate(const Monomial& m) const;
  Terms differentiate(const Terms& t) const;

  std::vector<Monomial> basis() const;

  std::string format(const Monomial& m) const;
  std::string format(const Terms& t) const;
  // "1", "theta1*theta2", "t^2*theta".
  Monomial parse_monomial(const std::string& text) const;
  Terms parse_terms(const std::string& text) const;

  friend bool operator==(const CoefficientAlgebra& a, const CoefficientAlgebra& b);

 private:
  std::vector<Generator> generators_;
  std::vector<Block> blocks_;
  std::vector<Terms> differential_;
};

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

class AlgebraElement {
 public:
  AlgebraElement(AlgebraPtr algebra, Terms terms = {});
  static AlgebraElement one(AlgebraPtr algebra);
  static AlgebraElement generator(AlgebraPtr algebra, const std::string& name);

  const AlgebraPtr& algebra() const { return algebra_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  AlgebraElement& operator+=(const AlgebraElement& o);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.terms_ == b.terms_;
  }

 private:
  AlgebraPtr algebra_;
  Terms terms_;
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement differentiate(const AlgebraElement& a);

// p(z) + q(z) dz with rational polynomial coefficients, lowest degree first.
struct IntervalForm {
  std::vector<Rational> p;
  std::vector<Rational> q;

  IntervalForm& operator+=(const IntervalForm& o);
  friend IntervalForm operator+(IntervalForm a, const IntervalForm& b) { return a += b; }
  friend IntervalForm operator*(const IntervalForm& a, const IntervalForm& b);
  friend bool operator==(const IntervalForm& a, const IntervalForm& b);
};

IntervalForm d(const IntervalForm& e);
Rational evaluate_at(const IntervalForm& e, const Rational& a);
Rational integrate_dz(const IntervalForm& e);

}  // namespace linf
