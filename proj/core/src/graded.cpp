#include "linf/graded.hpp"

#include <algorithm>
#include <numeric>

namespace linf {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error("empty rational literal");
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  bool digits = false, slash = false, denom_digits = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      (slash ? denom_digits : digits) = true;
    } else if (c == '/' && !slash && digits) {
      slash = true;
    } else {
      throw Error("not a rational literal: '" + s + "'");
    }
  }
  if (!digits || (slash && !denom_digits)) throw Error("not a rational literal: '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw Error("not a rational literal: '" + s + "'");
  if (q.get_den() == 0) throw Error("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

GradedSpace::GradedSpace(std::vector<Basis> basis) : basis_(std::move(basis)) {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].label.empty()) throw Error("empty basis label");
    auto [it, inserted] = lookup_.emplace(basis_[i].label, static_cast<int>(i));
    if (!inserted) throw Error("duplicate basis label '" + basis_[i].label + "'");
  }
}

GradedSpace GradedSpace::from_v_parities(std::vector<Basis> basis) {
  for (auto& b : basis) b.parity = b.parity.flipped();
  return GradedSpace(std::move(basis));
}

std::optional<int> GradedSpace::find(std::string_view label) const {
  auto it = lookup_.find(std::string(label));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

int GradedSpace::index(std::string_view label) const {
  auto i = find(label);
  if (!i) throw Error("unknown basis label '" + std::string(label) + "'");
  return *i;
}

bool operator==(const GradedSpace& a, const GradedSpace& b) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.basis_[i].label != b.basis_[i].label || a.basis_[i].parity != b.basis_[i].parity)
      return false;
  }
  return true;
}

Vector Vector::basis(int i, Rational c) {
  Vector v;
  v.add(i, c);
  return v;
}

void Vector::add(int i, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(i, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

Rational Vector::coeff(int i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

Vector& Vector::operator+=(const Vector& o) {
  for (const auto& [i, c] : o.coeffs_) add(i, c);
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  for (const auto& [i, c] : o.coeffs_) add(i, -c);
  return *this;
}

Vector& Vector::operator*=(const Rational& c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [i, x] : coeffs_) x *= c;
  return *this;
}

std::optional<Parity> Vector::parity(const GradedSpace& space) const {
  std::optional<Parity> p;
  for (const auto& [i, c] : coeffs_) {
    if (!p) p = space.parity(i);
    else if (*p != space.parity(i)) return std::nullopt;
  }
  return p;
}

std::string format_vector(const Vector& v, const GradedSpace& space) {
  if (v.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [i, c] : v) {
    Rational a = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (a != 1) out += format_rational(a) + " ";
    out += space.label(i);
    first = false;
  }
  return out;
}

Permutation Permutation::identity(int n) {
  Permutation p;
  p.images.resize(n);
  std::iota(p.images.begin(), p.images.end(), 0);
  return p;
}

bool Permutation::is_valid() const {
  std::vector<bool> seen(images.size(), false);
  for (int i : images) {
    if (i < 0 || i >= size() || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images.resize(images.size());
  for (int i = 0; i < size(); ++i) p.images[images[i]] = i;
  return p;
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.size() != size()) throw Error("permutation size mismatch");
  Permutation p;
  p.images.resize(images.size());
  for (int i = 0; i < size(); ++i) p.images[i] = images[next.images[i]];
  return p;
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  Permutation p = Permutation::identity(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.images.begin(), p.images.end()));
  return out;
}

int koszul_sign(std::span<const Parity> parities, const Permutation& sigma) {
  if (static_cast<int>(parities.size()) != sigma.size())
    throw Error("koszul_sign: parity list length does not match permutation degree");
  if (!sigma.is_valid()) throw Error("koszul_sign: not a permutation");
  int sign = 1;
  const auto& im = sigma.images;
  for (int a = 0; a < sigma.size(); ++a) {
    if (!parities[im[a]].is_odd()) continue;
    for (int b = a + 1; b < sigma.size(); ++b) {
      if (parities[im[b]].is_odd() && im[a] > im[b]) sign = -sign;
    }
  }
  return sign;
}

std::vector<Permutation> unshuffles(int p, int q) {
  if (p < 0 || q < 0) throw Error("unshuffles: negative block size");
  const int n = p + q;
  std::vector<Permutation> out;
  std::vector<int> pick(p);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    Permutation s;
    s.images = pick;
    std::vector<bool> used(n, false);
    for (int i : pick) used[i] = true;
    for (int i = 0; i < n; ++i)
      if (!used[i]) s.images.push_back(i);
    out.push_back(std::move(s));
    int k = p - 1;
    while (k >= 0 && pick[k] == n - p + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int j = k + 1; j < p; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

int canonicalize(Tuple& tuple, const GradedSpace& space) {
  // insertion sort, tracking transpositions of odd labels
  int sign = 1;
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    for (std::size_t j = i; j > 0 && tuple[j - 1] > tuple[j]; --j) {
      if (space.parity(tuple[j - 1]).is_odd() && space.parity(tuple[j]).is_odd()) sign = -sign;
      std::swap(tuple[j - 1], tuple[j]);
    }
  }
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    if (tuple[i] == tuple[i - 1] && space.parity(tuple[i]).is_odd()) return 0;
  }
  return sign;
}

MultiMap::MultiMap(int arity, bool symmetric, Parity parity)
    : arity_(arity), symmetric_(symmetric), parity_(parity) {
  if (arity < 0) throw Error("negative arity");
}

void MultiMap::add(Tuple tuple, const Vector& value, const GradedSpace& space) {
  if (static_cast<int>(tuple.size()) != arity_) throw Error("multimap entry has wrong arity");
  for (int i : tuple)
    if (i < 0 || i >= static_cast<int>(space.dim())) throw Error("label not in space");
  Vector v = value;
  if (symmetric_) {
    int s = canonicalize(tuple, space);
    if (s == 0) {
      if (!value.is_zero()) throw Error("symmetric entry on a repeated odd label must vanish");
      return;
    }
    v *= s;
  }
  auto& slot = entries_[tuple];
  slot += v;
  if (slot.is_zero()) entries_.erase(tuple);
}

Vector MultiMap::lookup(const Tuple& tuple, const GradedSpace& space) const {
  if (static_cast<int>(tuple.size()) != arity_) throw Error("arity mismatch");
  Tuple t = tuple;
  int s = 1;
  if (symmetric_) {
    s = canonicalize(t, space);
    if (s == 0) return {};
  }
  auto it = entries_.find(t);
  if (it == entries_.end()) return {};
  Vector v = it->second;
  if (s < 0) v *= -1;
  return v;
}

bool operator==(const MultiMap& a, const MultiMap& b) {
  return a.arity_ == b.arity_ && a.symmetric_ == b.symmetric_ && a.parity_ == b.parity_ &&
         a.entries_ == b.entries_;
}

namespace {

// Expands the product of basis expansions of args, tracking the Koszul sign of
// moving the map's own parity past nothing (values are plain vectors over k).
void expand(const MultiMap& map, std::span<const Vector> args, const GradedSpace& space,
            std::size_t slot, Tuple& tuple, Rational& coeff, Vector& out) {
  if (slot == args.size()) {
    Vector v = map.lookup(tuple, space);
    v *= coeff;
    out += v;
    return;
  }
  for (const auto& [i, c] : args[slot]) {
    tuple.push_back(i);
    Rational saved = coeff;
    coeff *= c;
    expand(map, args, space, slot + 1, tuple, coeff, out);
    coeff = saved;
    tuple.pop_back();
  }
}

}  // namespace

Vector evaluate(const MultiMap& map, std::span<const Vector> args, const GradedSpace& space) {
  if (static_cast<int>(args.size()) != map.arity()) throw Error("evaluate: arity mismatch");
  for (const auto& a : args)
    for (const auto& [i, c] : a)
      if (i < 0 || i >= static_cast<int>(space.dim())) throw Error("evaluate: label not in space");
  Vector out;
  Tuple tuple;
  Rational coeff = 1;
  expand(map, args, space, 0, tuple, coeff, out);
  return out;
}

namespace {

// All sorted tuples of basis indices of length n.
void sorted_tuples(int dim, int n, int start, Tuple& cur, std::vector<Tuple>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < dim; ++i) {
    cur.push_back(i);
    sorted_tuples(dim, n, i, cur, out);
    cur.pop_back();
  }
}

}  // namespace

MultiMap symmetrize(const MultiMap& map, const GradedSpace& space) {
  const int n = map.arity();
  MultiMap out(n, true, map.parity());
  Rational fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  std::vector<Tuple> tuples;
  Tuple cur;
  sorted_tuples(static_cast<int>(space.dim()), n, 0, cur, tuples);
  const auto perms = all_permutations(n);
  for (const Tuple& t : tuples) {
    Tuple probe = t;
    if (canonicalize(probe, space) == 0) continue;
    std::vector<Parity> ps;
    for (int i : t) ps.push_back(space.parity(i));
    Vector acc;
    for (const auto& sigma : perms) {
      Tuple permuted(n);
      for (int i = 0; i < n; ++i) permuted[i] = t[sigma.images[i]];
      Vector v = map.lookup(permuted, space);
      v *= Rational(koszul_sign(ps, sigma));
      acc += v;
    }
    acc *= 1 / fact;
    if (!acc.is_zero()) out.add(t, acc, space);
  }
  return out;
}

std::size_t rank(const Matrix& matrix) {
  std::vector<SparseRow> rows;
  for (const auto& r : matrix) {
    SparseRow row;
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[j] != 0) row[static_cast<int>(j)] = r[j];
    rows.push_back(std::move(row));
  }
  return rank(std::move(rows));
}

namespace {

using IntRow = std::map<int, mpz_class>;

IntRow to_integer_row(const SparseRow& row) {
  mpz_class l = 1;
  for (const auto& [j, q] : row) {
    mpz_class den = q.get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
  }
  IntRow out;
  for (const auto& [j, q] : row) {
    mpz_class v = q.get_num() * (l / q.get_den());
    if (v != 0) out[j] = v;
  }
  return out;
}

void normalize(IntRow& row) {
  mpz_class g = 0;
  for (const auto& [j, v] : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g > 1)
    for (auto& [j, v] : row) v /= g;
}

}  // namespace

// Fraction-free elimination: each new row is cross-multiplied against the pivot
// sharing its leading column, then divided by its content.
std::size_t rank(std::vector<SparseRow> rows) {
  std::map<int, IntRow> pivots;
  for (const auto& r : rows) {
    IntRow row = to_integer_row(r);
    while (!row.empty()) {
      const int lead = row.begin()->first;
      auto it = pivots.find(lead);
      if (it == pivots.end()) {
        normalize(row);
        pivots.emplace(lead, std::move(row));
        break;
      }
      const IntRow& p = it->second;
      mpz_class a = p.begin()->second;
      mpz_class b = row.begin()->second;
      IntRow next;
      for (const auto& [j, v] : row) next[j] = a * v;
      for (const auto& [j, v] : p) {
        auto& slot = next[j];
        slot -= b * v;
      }
      for (auto jt = next.begin(); jt != next.end();) {
        if (jt->second == 0) jt = next.erase(jt);
        else ++jt;
      }
      normalize(next);
      row = std::move(next);
    }
  }
  return pivots.size();
}

}  // namespace linf

namespace linf {

namespace {

bool looks_rational(const std::string& tok) {
  if (tok.empty()) return false;
  std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (i >= tok.size()) return false;
  for (; i < tok.size(); ++i)
    if (!((tok[i] >= '0' && tok[i] <= '9') || tok[i] == '/')) return false;
  return true;
}

}  // namespace

std::vector<std::pair<Rational, std::string>> parse_combination(std::string_view text) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) toks.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) toks.push_back(std::move(cur));
  // a sign written against its term, as in "-a + b"
  for (std::size_t i = 0; i < toks.size(); ++i)
    if (toks[i].size() > 1 && (toks[i][0] == '-' || toks[i][0] == '+')) {
      toks.insert(toks.begin() + i + 1, toks[i].substr(1));
      toks[i].resize(1);
    }
  if (toks.empty()) throw Error("empty linear combination");
  if (toks.size() == 1 && toks[0] == "0") return {};

  std::vector<std::pair<Rational, std::string>> out;
  std::size_t i = 0;
  bool first = true;
  while (i < toks.size()) {
    Rational sign = 1;
    if (toks[i] == "+" || toks[i] == "-") {
      sign = toks[i] == "-" ? -1 : 1;
      ++i;
    } else if (!first) {
      throw Error("expected '+' or '-' before '" + toks[i] + "'");
    }
    if (i >= toks.size()) throw Error("dangling sign in linear combination");
    Rational coeff = 1;
    std::string atom = "1";
    if (looks_rational(toks[i])) {
      coeff = parse_rational(toks[i]);
      ++i;
      if (i < toks.size() && toks[i] != "+" && toks[i] != "-") atom = toks[i++];
    } else {
      atom = toks[i++];
    }
    out.emplace_back(sign * coeff, atom);
    first = false;
  }
  return out;
}

}  // namespace linf
