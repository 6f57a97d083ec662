#include "linf/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace linf {

void add_term(Terms& t, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = t.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
}

Terms& operator+=(Terms& a, const Terms& b) {
  for (const auto& [m, c] : b) add_term(a, m, c);
  return a;
}

Terms scaled(Terms t, const Rational& c) {
  if (c == 0) return {};
  for (auto& [m, x] : t) x *= c;
  return t;
}

CoefficientAlgebra::CoefficientAlgebra(std::vector<Generator> generators,
                                       std::vector<Block> blocks,
                                       std::vector<Terms> differential, bool check_square)
    : generators_(std::move(generators)),
      blocks_(std::move(blocks)),
      differential_(std::move(differential)) {
  differential_.resize(generators_.size());
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& g = generators_[i];
    if (g.block < 0 || g.block >= static_cast<int>(blocks_.size()))
      throw Error("generator '" + g.name + "' refers to a missing block");
    for (std::size_t j = 0; j < i; ++j)
      if (generators_[j].name == g.name) throw Error("duplicate generator '" + g.name + "'");
    for (const auto& [m, c] : differential_[i]) {
      if (m.size() != generators_.size()) throw Error("malformed monomial in differential");
      if (is_unit(m)) throw Error("d(" + g.name + ") must lie in the augmentation ideal");
      if (parity(m) != g.parity.flipped())
        throw Error("d(" + g.name + ") must have parity opposite to the generator");
    }
  }
  if (check_square) {
    for (const auto& m : basis()) {
      if (!differentiate(differentiate(m)).empty())
        throw Error("differential does not square to zero on " + format(m));
    }
  }
}

AlgebraPtr CoefficientAlgebra::ground() {
  static const AlgebraPtr k = std::make_shared<const CoefficientAlgebra>(
      std::vector<Generator>{}, std::vector<Block>{{0, false}}, std::vector<Terms>{}, false);
  return k;
}

AlgebraPtr CoefficientAlgebra::nilpotent(
    const std::vector<std::pair<std::string, Parity>>& generators, int order,
    const std::map<std::string, std::string>& differential) {
  if (order < 1) throw Error("nilpotency order must be at least 1");
  std::vector<Generator> gens;
  for (const auto& [name, p] : generators) gens.push_back({name, p, 0});
  // parse the differential against a differential-free copy first
  CoefficientAlgebra bare(gens, {{order, false}}, {}, false);
  std::vector<Terms> d(gens.size());
  for (const auto& [name, text] : differential) {
    auto i = bare.find_generator(name);
    if (!i) throw Error("differential of undeclared generator '" + name + "'");
    d[*i] = bare.parse_terms(text);
  }
  return std::make_shared<const CoefficientAlgebra>(std::move(gens),
                                                    std::vector<Block>{{order, false}},
                                                    std::move(d), true);
}

AlgebraPtr CoefficientAlgebra::tensor(const AlgebraPtr& a, const AlgebraPtr& b) {
  std::vector<Generator> gens = a->generators_;
  std::vector<Block> blocks = a->blocks_;
  const int shift = static_cast<int>(blocks.size());
  for (auto g : b->generators_) {
    g.block += shift;
    gens.push_back(g);
  }
  blocks.insert(blocks.end(), b->blocks_.begin(), b->blocks_.end());
  const std::size_t na = a->num_generators(), n = gens.size();
  std::vector<Terms> d;
  for (const auto& t : a->differential_) {
    Terms e;
    for (const auto& [m, c] : t) {
      Monomial w = m;
      w.resize(n, 0);
      e[w] = c;
    }
    d.push_back(std::move(e));
  }
  for (const auto& t : b->differential_) {
    Terms e;
    for (const auto& [m, c] : t) {
      Monomial w(na, 0);
      w.insert(w.end(), m.begin(), m.end());
      e[w] = c;
    }
    d.push_back(std::move(e));
  }
  return std::make_shared<const CoefficientAlgebra>(std::move(gens), std::move(blocks),
                                                    std::move(d), false);
}

AlgebraPtr CoefficientAlgebra::interval(int max_degree, const std::string& z) {
  std::vector<Generator> gens{{z, Parity::even(), 0}, {"d" + z, Parity::odd(), 0}};
  // z^k dz has word length k+1
  std::vector<Block> blocks{{max_degree + 1, true}};
  std::vector<Terms> d(2);
  d[0][Monomial{0, 1}] = 1;
  return std::make_shared<const CoefficientAlgebra>(std::move(gens), std::move(blocks),
                                                    std::move(d), false);
}

std::optional<int> CoefficientAlgebra::find_generator(const std::string& name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

Monomial CoefficientAlgebra::generator_monomial(int i) const {
  Monomial m = unit();
  m.at(i) = 1;
  return m;
}

bool CoefficientAlgebra::is_unit(const Monomial& m) const {
  return std::all_of(m.begin(), m.end(), [](auto e) { return e == 0; });
}

Parity CoefficientAlgebra::parity(const Monomial& m) const {
  Parity p;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (generators_[i].parity.is_odd() && (m[i] & 1)) p += Parity::odd();
  return p;
}

int CoefficientAlgebra::length(const Monomial& m) const {
  int l = 0;
  for (auto e : m) l += e;
  return l;
}

std::optional<std::pair<int, Monomial>> CoefficientAlgebra::multiply(const Monomial& a,
                                                                     const Monomial& b) const {
  const std::size_t n = generators_.size();
  Monomial out(n, 0);
  int sign = 1;
  int odd_in_a_after = 0;  // odd generators of a with index > current
  for (std::size_t i = 0; i < n; ++i)
    if (generators_[i].parity.is_odd() && a[i]) ++odd_in_a_after;
  for (std::size_t i = 0; i < n; ++i) {
    const bool odd = generators_[i].parity.is_odd();
    if (odd) {
      if (a[i] && b[i]) return std::nullopt;
      if (a[i]) --odd_in_a_after;
      if (b[i] && (odd_in_a_after & 1)) sign = -sign;
    }
    out[i] = static_cast<std::uint8_t>(a[i] + b[i]);
  }
  std::vector<int> lengths(blocks_.size(), 0);
  for (std::size_t i = 0; i < n; ++i) lengths[generators_[i].block] += out[i];
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    if (!blocks_[k].strict && lengths[k] > blocks_[k].order) return std::nullopt;
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    if (blocks_[k].strict && lengths[k] > blocks_[k].order)
      throw Error("polynomial degree bound exceeded in interval algebra");
  return std::make_pair(sign, std::move(out));
}

Terms CoefficientAlgebra::multiply(const Terms& a, const Terms& b) const {
  Terms out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      auto p = multiply(ma, mb);
      if (p) add_term(out, p->second, p->first * ca * cb);
    }
  return out;
}

Terms CoefficientAlgebra::differentiate(const Monomial& m) const {
  // m = g_0^{e_0} g_1^{e_1} ...; Leibniz over the factors in generator order
  Terms out;
  Parity prefix;
  const std::size_t n = generators_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k] == 0) continue;
    Monomial before(n, 0), after(n, 0), power(n, 0);
    for (std::size_t j = 0; j < k; ++j) before[j] = m[j];
    for (std::size_t j = k + 1; j < n; ++j) after[j] = m[j];
    power[k] = static_cast<std::uint8_t>(m[k] - 1);
    // d(g^e) = e g^{e-1} dg; odd g has e = 1
    Terms middle = multiply(Terms{{power, Rational(static_cast<int>(m[k]))}}, differential_[k]);
    Terms piece = multiply(multiply(Terms{{before, 1}}, middle), Terms{{after, 1}});
    if (prefix.is_odd()) piece = scaled(std::move(piece), -1);
    out += piece;
    if (generators_[k].parity.is_odd() && (m[k] & 1)) prefix += Parity::odd();
  }
  return out;
}

Terms CoefficientAlgebra::differentiate(const Terms& t) const {
  Terms out;
  for (const auto& [m, c] : t) out += scaled(differentiate(m), c);
  return out;
}

std::vector<Monomial> CoefficientAlgebra::basis() const {
  const std::size_t n = generators_.size();
  std::vector<Monomial> out;
  Monomial cur(n, 0);
  std::vector<int> used(blocks_.size(), 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    const auto& g = generators_[i];
    const int room = blocks_[g.block].order - used[g.block];
    const int top = g.parity.is_odd() ? std::min(1, room) : room;
    for (int e = 0; e <= top; ++e) {
      cur[i] = static_cast<std::uint8_t>(e);
      used[g.block] += e;
      self(self, i + 1);
      used[g.block] -= e;
    }
    cur[i] = 0;
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
    int la = length(a), lb = length(b);
    if (la != lb) return la < lb;
    return a > b;
  });
  return out;
}

std::string CoefficientAlgebra::format(const Monomial& m) const {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    if (!out.empty()) out += "*";
    out += generators_[i].name;
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string CoefficientAlgebra::format(const Terms& t) const {
  if (t.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : t) {
    Rational a = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (is_unit(m)) {
      out += format_rational(a);
    } else {
      if (a != 1) out += format_rational(a) + " ";
      out += format(m);
    }
    first = false;
  }
  return out;
}

Monomial CoefficientAlgebra::parse_monomial(const std::string& text) const {
  Monomial m = unit();
  if (text == "1") return m;
  std::stringstream ss(text);
  std::string factor;
  int last_odd = -1;
  while (std::getline(ss, factor, '*')) {
    int e = 1;
    std::string name = factor;
    if (auto caret = factor.find('^'); caret != std::string::npos) {
      name = factor.substr(0, caret);
      try {
        e = std::stoi(factor.substr(caret + 1));
      } catch (...) {
        throw Error("bad exponent in '" + factor + "'");
      }
      if (e < 1) throw Error("bad exponent in '" + factor + "'");
    }
    auto i = find_generator(name);
    if (!i) throw Error("unknown generator '" + name + "'");
    const int total = m[*i] + e;
    if (generators_[*i].parity.is_odd() && total > 1)
      throw Error("odd generator '" + name + "' squared in monomial '" + text + "'");
    if (total > 255) throw Error("exponent too large in '" + text + "'");
    // odd factors must appear in declaration order so that no reordering sign arises
    if (generators_[*i].parity.is_odd()) {
      if (*i < last_odd)
        throw Error("monomial '" + text + "' must list odd generators in declaration order");
      last_odd = *i;
    }
    m[*i] = static_cast<std::uint8_t>(total);
  }
  return m;
}

Terms CoefficientAlgebra::parse_terms(const std::string& text) const {
  Terms out;
  for (const auto& [c, atom] : parse_combination(text)) add_term(out, parse_monomial(atom), c);
  return out;
}

bool operator==(const CoefficientAlgebra& a, const CoefficientAlgebra& b) {
  if (a.generators_.size() != b.generators_.size() || a.blocks_.size() != b.blocks_.size())
    return false;
  for (std::size_t i = 0; i < a.generators_.size(); ++i) {
    const auto &x = a.generators_[i], &y = b.generators_[i];
    if (x.name != y.name || x.parity != y.parity || x.block != y.block) return false;
  }
  for (std::size_t i = 0; i < a.blocks_.size(); ++i)
    if (a.blocks_[i].order != b.blocks_[i].order || a.blocks_[i].strict != b.blocks_[i].strict)
      return false;
  return a.differential_ == b.differential_;
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a == b || (a && b && *a == *b);
}

AlgebraElement::AlgebraElement(AlgebraPtr algebra, Terms terms)
    : algebra_(std::move(algebra)), terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0) it = terms_.erase(it);
    else ++it;
  }
}

AlgebraElement AlgebraElement::one(AlgebraPtr algebra) {
  Monomial u = algebra->unit();
  return AlgebraElement(std::move(algebra), Terms{{u, 1}});
}

AlgebraElement AlgebraElement::generator(AlgebraPtr algebra, const std::string& name) {
  auto i = algebra->find_generator(name);
  if (!i) throw Error("unknown generator '" + name + "'");
  Monomial m = algebra->generator_monomial(*i);
  return AlgebraElement(std::move(algebra), Terms{{m, 1}});
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (!same_algebra(algebra_, o.algebra_)) throw Error("elements of different algebras");
  terms_ += o.terms_;
  return *this;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  if (!same_algebra(a.algebra(), b.algebra())) throw Error("multiply: mixed algebras");
  return AlgebraElement(a.algebra(), a.algebra()->multiply(a.terms(), b.terms()));
}

AlgebraElement differentiate(const AlgebraElement& a) {
  return AlgebraElement(a.algebra(), a.algebra()->differentiate(a.terms()));
}

namespace {

void trim(std::vector<Rational>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

std::vector<Rational> poly_add(std::vector<Rational> a, const std::vector<Rational>& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  trim(a);
  return a;
}

std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Rational> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

}  // namespace

IntervalForm& IntervalForm::operator+=(const IntervalForm& o) {
  p = poly_add(std::move(p), o.p);
  q = poly_add(std::move(q), o.q);
  return *this;
}

IntervalForm operator*(const IntervalForm& a, const IntervalForm& b) {
  // (p + q dz)(p' + q' dz) = pp' + (pq' + qp') dz, z even
  IntervalForm out;
  out.p = poly_mul(a.p, b.p);
  out.q = poly_add(poly_mul(a.p, b.q), poly_mul(a.q, b.p));
  return out;
}

bool operator==(const IntervalForm& a, const IntervalForm& b) {
  auto x = a, y = b;
  trim(x.p), trim(x.q), trim(y.p), trim(y.q);
  return x.p == y.p && x.q == y.q;
}

IntervalForm d(const IntervalForm& e) {
  IntervalForm out;
  for (std::size_t i = 1; i < e.p.size(); ++i) {
    out.q.resize(i);
    out.q[i - 1] = e.p[i] * static_cast<long>(i);
  }
  trim(out.q);
  return out;
}

Rational evaluate_at(const IntervalForm& e, const Rational& a) {
  Rational v = 0, pw = 1;
  for (const auto& c : e.p) {
    v += c * pw;
    pw *= a;
  }
  return v;
}

Rational integrate_dz(const IntervalForm& e) {
  Rational v = 0;
  for (std::size_t i = 0; i < e.q.size(); ++i) v += e.q[i] / Rational(static_cast<long>(i + 1));
  return v;
}

}  // namespace linf
