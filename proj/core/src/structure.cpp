#include "linf/structure.hpp"

#include <algorithm>

namespace linf {

std::string kind_name(Kind k) { return k == Kind::LInfinity ? "linfty" : "ainfty"; }

Structure::Structure(Kind kind, Cochain maps) : kind_(kind), maps_(std::move(maps)) {
  if (maps_.flavor() != flavor_of(kind_))
    throw Error("structure maps have the wrong flavor for " + kind_name(kind_));
  auto p = parity(maps_);
  if (p && !p->is_odd()) throw Error("structure maps must be odd");
  if (!p && !maps_.is_zero()) throw Error("structure maps must be odd");
}

int default_window(const Structure& s) {
  const int k = s.max_arity();
  return std::max(1, 2 * k - 1);
}

RelationReport verify(const Structure& s, std::optional<int> window) {
  RelationReport r;
  r.window = window.value_or(default_window(s));
  if (r.window < default_window(s))
    throw Error("relation window " + std::to_string(r.window) +
                " is too small: compositions reach arity " + std::to_string(default_window(s)));
  Cochain defect = compose(s.maps(), s.maps(), r.window) + apply_d(s.maps());
  const std::pair<const Tuple, TensorElement>* first = nullptr;
  for (const auto& e : defect.entries()) {
    if (static_cast<int>(e.first.size()) > r.window) continue;
    if (!first || tuple_less(e.first, first->first)) first = &e;
  }
  if (first) {
    r.ok = false;
    r.arity = static_cast<int>(first->first.size());
    r.tuple = first->first;
    r.defect = first->second;
  }
  return r;
}

RelationReport verify_linfty(const Structure& s, std::optional<int> window) {
  if (s.kind() != Kind::LInfinity) throw Error("verify_linfty needs an L-infinity structure");
  return verify(s, window);
}

RelationReport verify_ainfty(const Structure& s, std::optional<int> window) {
  if (s.kind() != Kind::AInfinity) throw Error("verify_ainfty needs an A-infinity structure");
  return verify(s, window);
}

std::string describe(const RelationReport& r, const Structure& s) {
  if (r.ok) return "relations hold up to arity " + std::to_string(r.window);
  return "relation fails at arity " + std::to_string(r.arity) + " on " +
         format_tuple(r.tuple, *s.space()) + ": defect " +
         format(r.defect, *s.space(), *s.algebra());
}

namespace {

Matrix invert(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix a = m, inv(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw Error("degenerate pairing");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace

InnerProduct::InnerProduct(SpacePtr space, Matrix gram)
    : space_(std::move(space)), gram_(std::move(gram)) {
  const std::size_t n = space_->dim();
  if (gram_.size() != n) throw Error("pairing matrix has the wrong size");
  for (const auto& row : gram_)
    if (row.size() != n) throw Error("pairing matrix has the wrong size");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Parity pi = space_->v_parity(i), pj = space_->v_parity(j);
      if (gram_[i][j] != 0 && pi != pj)
        throw Error("pairing couples " + space_->label(i) + " and " + space_->label(j) +
                    " of different parity");
      if (gram_[j][i] != sign_of(pi, pj) * gram_[i][j])
        throw Error("pairing is not graded-symmetric at (" + space_->label(i) + "," +
                    space_->label(j) + ")");
    }
  inverse_ = invert(gram_);
}

Terms pairing_form(const Cochain& c, const InnerProduct& g, const Tuple& x) {
  if (x.empty()) throw Error("pairing_form needs at least one argument");
  Tuple args(x.begin(), x.end() - 1);
  const int last = x.back();
  const CoefficientAlgebra& alg = *c.algebra();
  Terms out;
  for (const auto& [k, coeff] : c.value(args)) {
    const Rational& gv = g(k.basis, last);
    if (gv == 0) continue;
    Rational v = coeff * gv;
    if (alg.parity(k.mono).is_odd() && c.space()->parity(last).is_odd()) v = -v;
    add_term(out, k.mono, v);
  }
  return out;
}

CyclicReport verify_cyclic(const Cochain& c, const InnerProduct& g, int max_arity) {
  CyclicReport r;
  const GradedSpace& space = *c.space();
  for (int n : c.arities()) {
    if (n > max_arity || n == 0) continue;
    for (const Tuple& x : basis_tuples(space, Flavor::Tensor, n + 1)) {
      // rotate x_{n+1} to the front
      Tuple y(n + 1);
      y[0] = x[n];
      Parity rest;
      for (int i = 0; i < n; ++i) {
        y[i + 1] = x[i];
        rest += space.parity(x[i]);
      }
      Terms lhs = pairing_form(c, g, x);
      Terms rhs = pairing_form(c, g, y);
      if (rest.is_odd() && space.parity(x[n]).is_odd()) rhs = scaled(std::move(rhs), -1);
      if (lhs != rhs) {
        r.ok = false;
        r.arity = n;
        r.tuple = x;
        r.lhs = std::move(lhs);
        r.rhs = std::move(rhs);
        return r;
      }
    }
  }
  return r;
}

CyclicReport verify_cyclic(const Structure& s, const InnerProduct& g,
                           std::optional<int> max_arity) {
  if (!(*g.space() == *s.space())) throw Error("pairing is declared on a different space");
  return verify_cyclic(s.maps(), g, max_arity.value_or(std::max(0, s.max_arity())));
}

std::string describe(const CyclicReport& r, const Structure& s) {
  if (r.ok) return "cyclic";
  return "cyclicity fails at arity " + std::to_string(r.arity) + " on " +
         format_tuple(r.tuple, *s.space()) + ": " + s.algebra()->format(r.lhs) + " vs " +
         s.algebra()->format(r.rhs);
}

Structure symmetrize_to_linfty(const Structure& s) {
  if (s.kind() != Kind::AInfinity) throw Error("symmetrize_to_linfty needs an A-infinity structure");
  return Structure(Kind::LInfinity, symmetrize_cochain(s.maps()));
}

namespace {

Vector parse_vector(const std::string& text, const GradedSpace& space) {
  Vector v;
  for (const auto& [c, atom] : parse_combination(text)) v.add(space.index(atom), c);
  return v;
}

}  // namespace

// m_1(sa) = s(da), m_2(sa, sb) = (−1)^{|a|} s(ab) with |a| the parity in V.
Structure from_classical(Kind kind, const GradedSpace& space,
                         const std::vector<ClassicalEntry>& differential,
                         const std::vector<ClassicalEntry>& product) {
  auto sp = std::make_shared<const GradedSpace>(space);
  Cochain maps(sp, CoefficientAlgebra::ground(), flavor_of(kind));
  for (const auto& e : differential) {
    if (e.args.size() != 1) throw Error("differential entries take one argument");
    maps.add(Tuple{space.index(e.args[0])}, parse_vector(e.value, space));
  }
  for (const auto& e : product) {
    if (e.args.size() != 2) throw Error("product entries take two arguments");
    const int a = space.index(e.args[0]), b = space.index(e.args[1]);
    Vector v = parse_vector(e.value, space);
    for (const auto& [i, c] : v)
      if (space.v_parity(i) != space.v_parity(a) + space.v_parity(b))
        throw Error("product " + e.args[0] + "*" + e.args[1] + " is not parity-preserving");
    if (space.v_parity(a).is_odd()) v *= -1;
    maps.add(Tuple{a, b}, v);
  }
  return Structure(kind, std::move(maps));
}

namespace {

GradedSpace v_space(const std::vector<std::pair<std::string, int>>& labels) {
  std::vector<GradedSpace::Basis> basis;
  for (const auto& [l, p] : labels) basis.push_back({l, Parity{static_cast<std::uint8_t>(p)}});
  return GradedSpace::from_v_parities(std::move(basis));
}

Preset lie(const GradedSpace& space, const std::vector<ClassicalEntry>& brackets) {
  return {from_classical(Kind::LInfinity, space, {}, brackets), std::nullopt};
}

// End(k^{1|1}) with δ = e01: product table and d = [δ, −].
struct EndData {
  GradedSpace space;
  std::vector<ClassicalEntry> d, product, bracket;
};

EndData end11() {
  EndData out{v_space({{"e00", 0}, {"e01", 1}, {"e10", 1}, {"e11", 0}}), {}, {}, {}};
  const char* names[2][2] = {{"e00", "e01"}, {"e10", "e11"}};
  auto par = [](int i, int j) { return (i + j) % 2; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          std::string ab = j == k ? names[i][l] : "";
          std::string ba = l == i ? names[k][j] : "";
          if (!ab.empty()) out.product.push_back({{names[i][j], names[k][l]}, ab});
          // graded commutator [a,b] = ab − (−1)^{|a||b|} ba
          const bool both_odd = par(i, j) && par(k, l);
          std::string value;
          if (!ab.empty() && !ba.empty()) {
            if (ab == ba) value = both_odd ? "2 " + ab : "";
            else value = ab + (both_odd ? " + " : " - ") + ba;
          } else if (!ab.empty()) {
            value = ab;
          } else if (!ba.empty()) {
            value = (both_odd ? "" : "-1 ") + ba;
          }
          // Lie entries are taken once per unordered pair
          const int a = 2 * i + j, b = 2 * k + l;
          if (!value.empty() && a <= b) out.bracket.push_back({{names[i][j], names[k][l]}, value});
        }
  out.d = {{{"e00"}, "-1 e01"}, {{"e11"}, "e01"}, {{"e10"}, "e00 + e11"}};
  return out;
}

Matrix zero_matrix(std::size_t n) { return Matrix(n, std::vector<Rational>(n, 0)); }

Structure m3_example() {
  // ΠV = span(x, u even; y, z odd); built as the twist of
  // m_3(x,x,u) = y, m_3(x,u,u) = z by the even element x.
  auto sp = std::make_shared<const GradedSpace>(GradedSpace(
      {{"x", Parity::even()}, {"u", Parity::even()}, {"y", Parity::odd()}, {"z", Parity::odd()}}));
  Cochain m(sp, CoefficientAlgebra::ground(), Flavor::Symmetric);
  const int x = 0, u = 1, y = 2, z = 3;
  m.add(Tuple{u}, Vector::basis(y, Rational(1, 2)));
  m.add(Tuple{x, u}, Vector::basis(y));
  m.add(Tuple{u, u}, Vector::basis(z));
  m.add(Tuple{x, x, u}, Vector::basis(y));
  m.add(Tuple{x, u, u}, Vector::basis(z));
  return Structure(Kind::LInfinity, std::move(m));
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"abelian(2,1)",          "lie(b)",          "lie(sl2)",
          "lie(heisenberg3)",      "dga(dual_numbers)", "dga(upper_triangular_2)",
          "cyclic(sl2_killing)",   "cyclic(dual_numbers)", "linfty(m3_example)",
          "linfty(two_term)",      "dgla(end11)",     "dga(end11)"};
}

Preset preset(const std::string& name) {
  if (name.rfind("abelian(", 0) == 0 && name.back() == ')') {
    const std::string args = name.substr(8, name.size() - 9);
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw Error("abelian preset needs (even_dim,odd_dim)");
    int p = 0, q = 0;
    try {
      p = std::stoi(args.substr(0, comma));
      q = std::stoi(args.substr(comma + 1));
    } catch (...) {
      throw Error("abelian preset needs integer dimensions");
    }
    if (p < 0 || q < 0 || p + q > 8) throw Error("abelian preset dimensions out of range");
    std::vector<std::pair<std::string, int>> labels;
    for (int i = 1; i <= p; ++i) labels.push_back({"a" + std::to_string(i), 0});
    for (int i = 1; i <= q; ++i) labels.push_back({"c" + std::to_string(i), 1});
    auto sp = std::make_shared<const GradedSpace>(v_space(labels));
    return {Structure(Kind::LInfinity, Cochain(sp, CoefficientAlgebra::ground(), Flavor::Symmetric)),
            std::nullopt};
  }
  if (name == "lie(b)") return lie(v_space({{"e", 0}, {"f", 0}}), {{{"e", "f"}, "f"}});
  if (name == "lie(sl2)" || name == "cyclic(sl2_killing)") {
    auto space = v_space({{"h", 0}, {"e", 0}, {"f", 0}});
    Preset p = lie(space, {{{"h", "e"}, "2 e"}, {{"h", "f"}, "-2 f"}, {{"e", "f"}, "h"}});
    if (name == "cyclic(sl2_killing)") {
      Matrix k = zero_matrix(3);
      k[0][0] = 8;
      k[1][2] = k[2][1] = 4;
      p.pairing = InnerProduct(p.structure.space(), k);
    }
    return p;
  }
  if (name == "lie(heisenberg3)")
    return lie(v_space({{"x", 0}, {"y", 0}, {"z", 0}}), {{{"x", "y"}, "z"}});
  if (name == "dga(dual_numbers)" || name == "cyclic(dual_numbers)") {
    auto space = v_space({{"one", 0}, {"x", 0}});
    Preset p{from_classical(Kind::AInfinity, space, {},
                            {{{"one", "one"}, "one"}, {{"one", "x"}, "x"}, {{"x", "one"}, "x"}}),
             std::nullopt};
    if (name == "cyclic(dual_numbers)") {
      Matrix g = zero_matrix(2);
      g[0][1] = g[1][0] = 1;
      p.pairing = InnerProduct(p.structure.space(), g);
    }
    return p;
  }
  if (name == "dga(upper_triangular_2)") {
    auto space = v_space({{"E11", 0}, {"E12", 0}, {"E22", 0}});
    return {from_classical(Kind::AInfinity, space, {},
                           {{{"E11", "E11"}, "E11"},
                            {{"E11", "E12"}, "E12"},
                            {{"E12", "E22"}, "E12"},
                            {{"E22", "E22"}, "E22"}}),
            std::nullopt};
  }
  if (name == "linfty(m3_example)") return {m3_example(), std::nullopt};
  if (name == "linfty(two_term)") {
    auto sp = std::make_shared<const GradedSpace>(
        GradedSpace({{"a", Parity::odd()}, {"b", Parity::even()}}));
    Cochain m(sp, CoefficientAlgebra::ground(), Flavor::Symmetric);
    m.add(Tuple{0}, Vector::basis(1));
    return {Structure(Kind::LInfinity, std::move(m)), std::nullopt};
  }
  if (name == "dgla(end11)") {
    EndData e = end11();
    return {from_classical(Kind::LInfinity, e.space, e.d, e.bracket), std::nullopt};
  }
  if (name == "dga(end11)") {
    EndData e = end11();
    return {from_classical(Kind::AInfinity, e.space, e.d, e.product), std::nullopt};
  }
  throw Error("unknown preset '" + name + "'");
}

}  // namespace linf
