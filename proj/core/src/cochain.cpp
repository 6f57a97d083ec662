#include "linf/cochain.hpp"

#include <algorithm>
#include <set>

namespace linf {

TensorElement TensorElement::from_vector(const Vector& v, const CoefficientAlgebra& alg) {
  TensorElement t;
  for (const auto& [i, c] : v) t.add(i, alg.unit(), c);
  return t;
}

void TensorElement::add(int basis, const Monomial& mono, const Rational& c) {
  if (c == 0) return;
  TensorKey key{basis, mono};
  auto [it, inserted] = terms_.try_emplace(std::move(key), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational TensorElement::coeff(const TensorKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

TensorElement& TensorElement::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, x] : terms_) x *= c;
  return *this;
}

std::optional<Parity> parity(const TensorElement& t, const GradedSpace& space,
                             const CoefficientAlgebra& alg) {
  std::optional<Parity> p;
  for (const auto& [k, c] : t) {
    Parity q = space.parity(k.basis) + alg.parity(k.mono);
    if (!p) p = q;
    else if (*p != q) return std::nullopt;
  }
  return p;
}

bool touches_unit(const TensorElement& t, const CoefficientAlgebra& alg) {
  for (const auto& [k, c] : t)
    if (alg.is_unit(k.mono)) return true;
  return false;
}

TensorElement right_multiply(const TensorElement& t, const Terms& a,
                             const CoefficientAlgebra& alg) {
  TensorElement out;
  for (const auto& [k, c] : t)
    for (const auto& [m, x] : a) {
      auto p = alg.multiply(k.mono, m);
      if (p) out.add(k.basis, p->second, p->first * c * x);
    }
  return out;
}

TensorElement apply_d(const TensorElement& t, const GradedSpace& space,
                      const CoefficientAlgebra& alg) {
  TensorElement out;
  for (const auto& [k, c] : t) {
    const Rational s = space.parity(k.basis).is_odd() ? -c : c;
    for (const auto& [m, x] : alg.differentiate(k.mono)) out.add(k.basis, m, s * x);
  }
  return out;
}

TensorElement extend(const TensorElement& t, std::size_t generators) {
  TensorElement out;
  for (const auto& [k, c] : t) {
    Monomial m = k.mono;
    m.resize(generators, 0);
    out.add(k.basis, m, c);
  }
  return out;
}

std::string format(const TensorElement& t, const GradedSpace& space,
                   const CoefficientAlgebra& alg) {
  if (t.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : t) {
    Rational a = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (a != 1) out += format_rational(a) + " ";
    out += space.label(k.basis);
    if (!alg.is_unit(k.mono)) out += "|" + alg.format(k.mono);
    first = false;
  }
  return out;
}

Cochain::Cochain(SpacePtr space, AlgebraPtr algebra, Flavor flavor)
    : space_(std::move(space)), algebra_(std::move(algebra)), flavor_(flavor) {}

void Cochain::add(Tuple tuple, const TensorElement& value) {
  for (int i : tuple)
    if (i < 0 || i >= static_cast<int>(space_->dim())) throw Error("cochain: label not in space");
  TensorElement v = value;
  if (flavor_ == Flavor::Symmetric) {
    int s = canonicalize(tuple, *space_);
    if (s == 0) {
      if (!value.is_zero()) throw Error("symmetric entry on a repeated odd label must vanish");
      return;
    }
    if (s < 0) v *= -1;
  }
  auto it = entries_.find(tuple);
  if (it == entries_.end()) {
    if (!v.is_zero()) entries_.emplace(std::move(tuple), std::move(v));
    return;
  }
  it->second += v;
  if (it->second.is_zero()) entries_.erase(it);
}

void Cochain::add(Tuple tuple, const Vector& value) {
  add(std::move(tuple), TensorElement::from_vector(value, *algebra_));
}

TensorElement Cochain::value(const Tuple& tuple) const {
  if (flavor_ == Flavor::Tensor) {
    auto it = entries_.find(tuple);
    return it == entries_.end() ? TensorElement{} : it->second;
  }
  Tuple t = tuple;
  int s = canonicalize(t, *space_);
  if (s == 0) return {};
  auto it = entries_.find(t);
  if (it == entries_.end()) return {};
  TensorElement v = it->second;
  if (s < 0) v *= -1;
  return v;
}

int Cochain::max_arity() const {
  int m = -1;
  for (const auto& [t, v] : entries_) m = std::max(m, static_cast<int>(t.size()));
  return m;
}

std::vector<int> Cochain::arities() const {
  std::set<int> s;
  for (const auto& [t, v] : entries_) s.insert(static_cast<int>(t.size()));
  return {s.begin(), s.end()};
}

Cochain Cochain::component(int arity) const {
  Cochain out(space_, algebra_, flavor_);
  for (const auto& [t, v] : entries_)
    if (static_cast<int>(t.size()) == arity) out.entries_.emplace(t, v);
  return out;
}

Cochain Cochain::truncated(int max_arity) const {
  Cochain out(space_, algebra_, flavor_);
  for (const auto& [t, v] : entries_)
    if (static_cast<int>(t.size()) <= max_arity) out.entries_.emplace(t, v);
  return out;
}

Cochain Cochain::without_arity(int arity) const {
  Cochain out(space_, algebra_, flavor_);
  for (const auto& [t, v] : entries_)
    if (static_cast<int>(t.size()) != arity) out.entries_.emplace(t, v);
  return out;
}

void Cochain::check_compatible(const Cochain& o) const {
  if (flavor_ != o.flavor_) throw Error("cochain flavor mismatch");
  if (!(space_ == o.space_ || *space_ == *o.space_)) throw Error("cochains on different spaces");
  if (!same_algebra(algebra_, o.algebra_)) throw Error("cochains over different algebras");
}

Cochain& Cochain::operator+=(const Cochain& o) {
  check_compatible(o);
  for (const auto& [t, v] : o.entries_) add(t, v);
  return *this;
}

Cochain& Cochain::operator-=(const Cochain& o) {
  check_compatible(o);
  for (const auto& [t, v] : o.entries_) add(t, Rational(-1) * v);
  return *this;
}

Cochain& Cochain::operator*=(const Rational& c) {
  if (c == 0) {
    entries_.clear();
    return *this;
  }
  for (auto& [t, v] : entries_) v *= c;
  return *this;
}

bool operator==(const Cochain& a, const Cochain& b) {
  return a.flavor_ == b.flavor_ && a.entries_ == b.entries_;
}

namespace {

void sorted_tuples(const GradedSpace& space, int n, int start, Tuple& cur,
                   std::vector<Tuple>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < static_cast<int>(space.dim()); ++i) {
    if (!cur.empty() && cur.back() == i && space.parity(i).is_odd()) continue;
    cur.push_back(i);
    sorted_tuples(space, n, i, cur, out);
    cur.pop_back();
  }
}

void all_tuples(int dim, int n, Tuple& cur, std::vector<Tuple>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int i = 0; i < dim; ++i) {
    cur.push_back(i);
    all_tuples(dim, n, cur, out);
    cur.pop_back();
  }
}

Parity tuple_parity(const Tuple& t, const GradedSpace& space) {
  Parity p;
  for (int i : t) p += space.parity(i);
  return p;
}

}  // namespace

std::vector<Tuple> basis_tuples(const GradedSpace& space, Flavor flavor, int arity) {
  std::vector<Tuple> out;
  Tuple cur;
  if (flavor == Flavor::Symmetric) sorted_tuples(space, arity, 0, cur, out);
  else all_tuples(static_cast<int>(space.dim()), arity, cur, out);
  return out;
}

bool tuple_less(const Tuple& a, const Tuple& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::optional<Parity> parity(const Cochain& c) {
  std::optional<Parity> p;
  for (const auto& [t, v] : c.entries()) {
    Parity base = tuple_parity(t, *c.space());
    for (const auto& [k, x] : v) {
      Parity q = base + c.space()->parity(k.basis) + c.algebra()->parity(k.mono);
      if (!p) p = q;
      else if (*p != q) return std::nullopt;
    }
  }
  return p;
}

std::array<Cochain, 2> split_parity(const Cochain& c) {
  std::array<Cochain, 2> out{Cochain(c.space(), c.algebra(), c.flavor()),
                             Cochain(c.space(), c.algebra(), c.flavor())};
  for (const auto& [t, v] : c.entries()) {
    Parity base = tuple_parity(t, *c.space());
    for (const auto& [k, x] : v) {
      Parity q = base + c.space()->parity(k.basis) + c.algebra()->parity(k.mono);
      TensorElement e;
      e.add(k, x);
      out[q.bit].add(t, e);
    }
  }
  return out;
}

namespace {

struct Evaluator {
  const Cochain& c;
  std::span<const TensorElement> args;
  const GradedSpace& space;
  const CoefficientAlgebra& alg;
  TensorElement out;
  Tuple tuple;

  // acc = a_1⋯a_j so far (with sign folded into coeff); acc_parity = Σ|a_i|
  void run(std::size_t slot, const Monomial& acc, Parity acc_parity, const Rational& coeff) {
    if (slot == args.size()) {
      TensorElement v = c.value(tuple);
      if (v.is_zero()) return;
      for (const auto& [k, x] : v) {
        auto p = alg.multiply(k.mono, acc);
        if (p) out.add(k.basis, p->second, p->first * x * coeff);
      }
      return;
    }
    for (const auto& [k, x] : args[slot]) {
      // moving the earlier coefficients past this basis element
      Rational s = coeff * x;
      if (acc_parity.is_odd() && space.parity(k.basis).is_odd()) s = -s;
      auto p = alg.multiply(acc, k.mono);
      if (!p) continue;
      if (p->first < 0) s = -s;
      tuple.push_back(k.basis);
      run(slot + 1, p->second, acc_parity + alg.parity(k.mono), s);
      tuple.pop_back();
    }
  }
};

}  // namespace

TensorElement evaluate(const Cochain& c, std::span<const TensorElement> args) {
  Evaluator ev{c, args, *c.space(), *c.algebra(), {}, {}};
  ev.run(0, c.algebra()->unit(), Parity::even(), Rational(1));
  return std::move(ev.out);
}

namespace {

std::set<int> arity_set(const Cochain& c) {
  auto a = c.arities();
  return {a.begin(), a.end()};
}

Cochain compose_homogeneous(const Cochain& a, const Cochain& b, Parity b_parity, int max_arity) {
  const GradedSpace& space = *a.space();
  const CoefficientAlgebra& alg = *a.algebra();
  Cochain out(a.space(), a.algebra(), a.flavor());
  const auto a_ar = arity_set(a), b_ar = arity_set(b);
  if (a_ar.empty() || b_ar.empty()) return out;
  const int top = std::min(max_arity, *a_ar.rbegin() + *b_ar.rbegin() - 1);
  std::vector<TensorElement> args;
  for (int n = 0; n <= top; ++n) {
    for (const Tuple& x : basis_tuples(space, a.flavor(), n)) {
      TensorElement acc;
      for (int q : b_ar) {
        if (q > n || !a_ar.count(n - q + 1)) continue;
        if (a.flavor() == Flavor::Symmetric) {
          std::vector<Parity> ps;
          for (int i : x) ps.push_back(space.parity(i));
          for (const auto& sigma : unshuffles(q, n - q)) {
            Tuple inner(sigma.images.begin(), sigma.images.begin() + q);
            for (int& i : inner) i = x[i];
            TensorElement bv = b.value(inner);
            if (bv.is_zero()) continue;
            args.clear();
            args.push_back(std::move(bv));
            for (int j = q; j < n; ++j)
              args.push_back(TensorElement::from_vector(Vector::basis(x[sigma.images[j]]), alg));
            TensorElement v = evaluate(a, args);
            if (koszul_sign(ps, sigma) < 0) v *= -1;
            acc += v;
          }
        } else {
          for (int r = 0; r + q <= n; ++r) {
            Tuple inner(x.begin() + r, x.begin() + r + q);
            TensorElement bv = b.value(inner);
            if (bv.is_zero()) continue;
            Parity before;
            for (int j = 0; j < r; ++j) before += space.parity(x[j]);
            args.clear();
            for (int j = 0; j < r; ++j)
              args.push_back(TensorElement::from_vector(Vector::basis(x[j]), alg));
            args.push_back(std::move(bv));
            for (int j = r + q; j < n; ++j)
              args.push_back(TensorElement::from_vector(Vector::basis(x[j]), alg));
            TensorElement v = evaluate(a, args);
            if (before.is_odd() && b_parity.is_odd()) v *= -1;
            acc += v;
          }
        }
      }
      if (!acc.is_zero()) out.add(x, acc);
    }
  }
  return out;
}

}  // namespace

Cochain compose(const Cochain& a, const Cochain& b, int max_arity) {
  if (a.flavor() != b.flavor()) throw Error("compose: flavor mismatch");
  if (!same_algebra(a.algebra(), b.algebra())) throw Error("compose: different algebras");
  Cochain out(a.space(), a.algebra(), a.flavor());
  auto parts = split_parity(b);
  for (int p = 0; p < 2; ++p) {
    if (parts[p].is_zero()) continue;
    out += compose_homogeneous(a, parts[p], Parity{static_cast<std::uint8_t>(p)}, max_arity);
  }
  return out;
}

Cochain bracket(const Cochain& a, const Cochain& b, int max_arity) {
  Cochain out(a.space(), a.algebra(), a.flavor());
  auto pa = split_parity(a), pb = split_parity(b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (pa[i].is_zero() || pb[j].is_zero()) continue;
      out += compose(pa[i], pb[j], max_arity);
      Cochain back = compose(pb[j], pa[i], max_arity);
      if (i == 1 && j == 1) out += back;
      else out -= back;
    }
  return out;
}

Cochain apply_d(const Cochain& c) {
  Cochain out(c.space(), c.algebra(), c.flavor());
  for (const auto& [t, v] : c.entries()) out.add(t, apply_d(v, *c.space(), *c.algebra()));
  return out;
}

Cochain extend_scalars(const Cochain& c, const AlgebraPtr& target) {
  if (c.algebra()->num_generators() > target->num_generators())
    throw Error("extend_scalars: target algebra is smaller");
  for (std::size_t i = 0; i < c.algebra()->num_generators(); ++i)
    if (c.algebra()->generator(i).name != target->generator(i).name)
      throw Error("extend_scalars: target does not extend the source algebra");
  Cochain out(c.space(), target, c.flavor());
  for (const auto& [t, v] : c.entries()) out.add(t, extend(v, target->num_generators()));
  return out;
}

Cochain tensor_with(const Cochain& c, const Terms& a, const AlgebraPtr& target) {
  Cochain ext = extend_scalars(c, target);
  Cochain out(c.space(), target, c.flavor());
  for (const auto& [m, x] : a) {
    const Parity pa = target->parity(m);
    for (const auto& [t, v] : ext.entries()) {
      TensorElement w = right_multiply(v, Terms{{m, x}}, *target);
      if (pa.is_odd() && tuple_parity(t, *c.space()).is_odd()) w *= -1;
      out.add(t, w);
    }
  }
  return out;
}

Cochain symmetrize_cochain(const Cochain& c) {
  const GradedSpace& space = *c.space();
  Cochain out(c.space(), c.algebra(), Flavor::Symmetric);
  std::set<int> ar;
  for (int n : c.arities()) ar.insert(n);
  for (int n : ar) {
    const auto perms = all_permutations(n);
    for (const Tuple& x : basis_tuples(space, Flavor::Symmetric, n)) {
      std::vector<Parity> ps;
      for (int i : x) ps.push_back(space.parity(i));
      TensorElement acc;
      for (const auto& sigma : perms) {
        Tuple y(n);
        for (int i = 0; i < n; ++i) y[i] = x[sigma.images[i]];
        TensorElement v = c.value(y);
        if (v.is_zero()) continue;
        if (koszul_sign(ps, sigma) < 0) v *= -1;
        acc += v;
      }
      if (!acc.is_zero()) out.add(x, acc);
    }
  }
  return out;
}

std::string format_tuple(const Tuple& t, const GradedSpace& space) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += space.label(t[i]);
  }
  return out + ")";
}

}  // namespace linf
