#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

namespace linf {

using Rational = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

// "a - 1/2 b + 3 c": whitespace-separated signs, optional rational coefficient,
// then an atom. A bare rational stands for its coefficient times the atom "1".
std::vector<std::pair<Rational, std::string>> parse_combination(std::string_view text);

struct Parity {
  std::uint8_t bit = 0;

  static constexpr Parity even() { return {0}; }
  static constexpr Parity odd() { return {1}; }

  constexpr bool is_odd() const { return bit != 0; }
  constexpr Parity flipped() const { return {static_cast<std::uint8_t>(bit ^ 1u)}; }

  friend constexpr Parity operator+(Parity a, Parity b) {
    return {static_cast<std::uint8_t>(a.bit ^ b.bit)};
  }
  Parity& operator+=(Parity o) {
    bit ^= o.bit;
    return *this;
  }
  friend constexpr auto operator<=>(Parity, Parity) = default;
};

// (-1)^{a b}
inline int sign_of(Parity a, Parity b) { return (a.is_odd() && b.is_odd()) ? -1 : 1; }

// Basis of ΠV. The stored parities are those of ΠV; the parity in V is the flip.
class GradedSpace {
 public:
  struct Basis {
    std::string label;
    Parity parity;
  };

  GradedSpace() = default;
  explicit GradedSpace(std::vector<Basis> basis);

  static GradedSpace from_v_parities(std::vector<Basis> basis);

  std::size_t dim() const { return basis_.size(); }
  const std::string& label(int i) const { return basis_.at(i).label; }
  Parity parity(int i) const { return basis_.at(i).parity; }
  Parity v_parity(int i) const { return basis_.at(i).parity.flipped(); }
  const std::vector<Basis>& basis() const { return basis_; }

  std::optional<int> find(std::string_view label) const;
  int index(std::string_view label) const;

  friend bool operator==(const GradedSpace& a, const GradedSpace& b);

 private:
  std::vector<Basis> basis_;
  std::unordered_map<std::string, int> lookup_;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

// Sparse vector in the basis of a GradedSpace, keyed by basis index.
class Vector {
 public:
  Vector() = default;
  static Vector basis(int i, Rational c = 1);

  void add(int i, const Rational& c);
  Rational coeff(int i) const;
  bool is_zero() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(const Rational& c);
  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(const Rational& c, Vector a) { return a *= c; }
  friend bool operator==(const Vector& a, const Vector& b) { return a.coeffs_ == b.coeffs_; }

  auto begin() const { return coeffs_.begin(); }
  auto end() const { return coeffs_.end(); }

  // Parity if every term has the same parity; nullopt for zero or mixed vectors.
  std::optional<Parity> parity(const GradedSpace& space) const;

 private:
  std::map<int, Rational> coeffs_;
};

std::string format_vector(const Vector& v, const GradedSpace& space);

// images[i] is the index of the original element placed at position i:
// σ·(x_0,...,x_{n-1}) = (x_{images[0]}, ..., x_{images[n-1]}).
struct Permutation {
  std::vector<int> images;

  static Permutation identity(int n);
  int size() const { return static_cast<int>(images.size()); }
  bool is_valid() const;
  Permutation inverse() const;
  // (this ∘ other): first apply other, then this, in the action on sequences.
  Permutation then(const Permutation& next) const;
  friend bool operator==(const Permutation&, const Permutation&) = default;
};

std::vector<Permutation> all_permutations(int n);

// Sign picked up by reordering homogeneous elements of the given parities by sigma.
int koszul_sign(std::span<const Parity> parities, const Permutation& sigma);

// Permutations increasing on positions [0,p) and [p,p+q), lexicographic in images.
std::vector<Permutation> unshuffles(int p, int q);

using Tuple = std::vector<int>;

// Sorts a tuple of basis indices. Returns the Koszul sign of the sort, or 0 when
// an odd label repeats (the symmetric value is forced to vanish).
int canonicalize(Tuple& tuple, const GradedSpace& space);

class MultiMap {
 public:
  MultiMap(int arity, bool symmetric, Parity parity);

  int arity() const { return arity_; }
  bool symmetric() const { return symmetric_; }
  Parity parity() const { return parity_; }

  // Symmetric maps canonicalize the tuple; value is scaled by the sorting sign.
  void add(Tuple tuple, const Vector& value, const GradedSpace& space);
  Vector lookup(const Tuple& tuple, const GradedSpace& space) const;
  const std::map<Tuple, Vector>& entries() const { return entries_; }

  friend bool operator==(const MultiMap& a, const MultiMap& b);

 private:
  int arity_;
  bool symmetric_;
  Parity parity_;
  std::map<Tuple, Vector> entries_;
};

Vector evaluate(const MultiMap& map, std::span<const Vector> args, const GradedSpace& space);

// x ↦ (1/n!) Σ_σ koszul_sign(σ) map(σ·x), returned flagged symmetric.
MultiMap symmetrize(const MultiMap& map, const GradedSpace& space);

using Matrix = std::vector<std::vector<Rational>>;

std::size_t rank(const Matrix& matrix);

// Sparse rows: column index -> value.
using SparseRow = std::map<int, Rational>;
std::size_t rank(std::vector<SparseRow> rows);

}  // namespace linf
