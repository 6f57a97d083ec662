#include "linf/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "linf/complexes.hpp"

namespace linf {

std::string format(const Diagnostic& d, const std::string& source) {
  if (d.line == 0) return source + ": " + d.message;
  return source + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message;
}

namespace {

std::string summarize(const std::string& source, const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += format(d, source);
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::string source, std::vector<Diagnostic> diagnostics)
    : Error(summarize(source, diagnostics)),
      source_(std::move(source)),
      diagnostics_(std::move(diagnostics)) {}

std::optional<std::string> Task::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return std::nullopt;
}

void Task::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : params)
    if (k == key) {
      v = value;
      return;
    }
  params.emplace_back(key, value);
}

const Candidate* ExperimentFile::find_candidate(const std::string& name) const {
  for (const auto& c : candidates)
    if (c.name == name) return &c;
  return nullptr;
}

bool operator==(const ExperimentFile& a, const ExperimentFile& b) {
  auto same_space = [](const SpacePtr& x, const SpacePtr& y) {
    return x == y || (x && y && *x == *y);
  };
  auto same_algebra_ptr = [](const AlgebraPtr& x, const AlgebraPtr& y) {
    return (!x && !y) || (x && y && *x == *y);
  };
  if (a.convention != b.convention || !same_space(a.space, b.space) || a.preset != b.preset)
    return false;
  if (a.structure.has_value() != b.structure.has_value()) return false;
  if (a.structure && !(*a.structure == *b.structure)) return false;
  if (a.pairing_from_preset != b.pairing_from_preset) return false;
  if (a.pairing.has_value() != b.pairing.has_value()) return false;
  if (a.pairing && a.pairing->gram() != b.pairing->gram()) return false;
  if (!same_algebra_ptr(a.algebra, b.algebra)) return false;
  return a.candidates == b.candidates && a.tasks == b.tasks;
}

namespace {

struct Line {
  int number;
  std::string text;  // comment stripped, original columns kept
};

struct Tok {
  std::string text;
  int col;
};

const std::vector<std::string> kSections = {"space",         "coefficient_algebra", "structure",
                                            "pairing",       "mc_candidates",       "tasks"};

struct CommandSpec {
  std::string name;
  std::vector<std::string> keys;
  std::vector<std::string> required;
};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"verify", {"expect"}, {}},
      {"cyclic-verify", {"expect"}, {}},
      {"mc-check", {"candidate", "expect"}, {}},
      {"twist", {"candidate", "expect"}, {}},
      {"shift-check", {"xi", "eta", "expect"}, {"xi", "eta"}},
      {"homology", {"variant", "truncation", "expect"}, {}},
      {"morphism-check", {"variant", "truncation", "universal-order", "expect"}, {}},
      {"chi-check", {"variant", "weight", "truncation", "expect"}, {}},
      {"fiber-check", {"truncation", "universal-order", "expect"}, {}},
      {"gauge-check", {"xi", "twist", "expect"}, {"xi"}},
  };
  return specs;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// 1-based column of the first non-blank character at or after offset.
int column_at(const std::string& s, std::size_t offset) {
  while (offset < s.size() && (s[offset] == ' ' || s[offset] == '\t')) ++offset;
  return static_cast<int>(offset) + 1;
}

std::vector<Tok> split_tokens(const std::string& s, std::size_t from = 0, std::size_t to = std::string::npos) {
  std::vector<Tok> out;
  to = std::min(to, s.size());
  std::size_t i = from;
  while (i < to) {
    while (i < to && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i >= to) break;
    const std::size_t b = i;
    while (i < to && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    out.push_back({s.substr(b, i - b), static_cast<int>(b) + 1});
  }
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, std::string source) : source_(std::move(source)) {
    split_sections(text);
  }

  ExperimentFile run() {
    ExperimentFile f;
    f.source = source_;
    parse_space(f);
    parse_algebra(f);
    parse_structure(f);
    parse_pairing(f);
    parse_candidates(f);
    parse_tasks(f);
    if (!diags_.empty()) {
      std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::pair(a.line, a.column) < std::pair(b.line, b.column);
      });
      throw ParseError(source_, diags_);
    }
    return f;
  }

 private:
  void error(int line, int col, std::string msg) { diags_.push_back({line, col, std::move(msg)}); }

  void split_sections(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    std::string current;
    bool skipping = false;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string t = trim(raw);
      if (t.empty()) continue;
      if (t.front() == '[') {
        const int col = column_at(raw, 0);
        skipping = true;
        if (t.back() != ']') {
          error(number, col, "unterminated section header");
          current = "";
          continue;
        }
        const std::string name = trim(t.substr(1, t.size() - 2));
        if (std::find(kSections.begin(), kSections.end(), name) == kSections.end()) {
          error(number, col, "unknown section '" + name + "'");
          current = "";
          continue;
        }
        if (headers_.count(name)) {
          error(number, col, "duplicate section [" + name + "]");
          current = "";
          continue;
        }
        headers_[name] = number;
        skipping = false;
        current = name;
        sections_[name];
        continue;
      }
      if (current.empty()) {
        if (!skipping) error(number, column_at(raw, 0), "content outside of a section");
        continue;
      }
      sections_[current].push_back({number, raw});
    }
  }

  bool has(const std::string& section) const { return headers_.count(section) > 0; }
  int header_line(const std::string& section) const {
    auto it = headers_.find(section);
    return it == headers_.end() ? 0 : it->second;
  }
  const std::vector<Line>& lines(const std::string& section) {
    return sections_[section];
  }

  // "key: value" lines; returns nullopt when the line has another shape.
  static std::optional<std::pair<std::string, Tok>> key_value(const Line& l) {
    const auto colon = l.text.find(':');
    if (colon == std::string::npos) return std::nullopt;
    const std::string key = trim(l.text.substr(0, colon));
    if (!is_identifier(key)) return std::nullopt;
    const std::string value = trim(l.text.substr(colon + 1));
    return std::make_pair(key, Tok{value, column_at(l.text, colon + 1)});
  }

  struct Term {
    Rational coeff;
    std::string atom;
    int col;
  };

  // Signed sum of optional rational coefficients times atoms. A bare rational is
  // returned with atom "1".
  std::optional<std::vector<Term>> combination(const Line& l, std::size_t from) {
    auto toks = split_tokens(l.text, from);
    if (toks.empty()) {
      error(l.number, column_at(l.text, from), "missing value");
      return std::nullopt;
    }
    std::vector<Tok> split;
    for (const auto& t : toks) {
      if (t.text.size() > 1 && (t.text[0] == '+' || t.text[0] == '-')) {
        split.push_back({t.text.substr(0, 1), t.col});
        split.push_back({t.text.substr(1), t.col + 1});
      } else {
        split.push_back(t);
      }
    }
    if (split.size() == 1 && split[0].text == "0") return std::vector<Term>{};
    std::vector<Term> out;
    std::size_t i = 0;
    bool first = true;
    while (i < split.size()) {
      Rational sign = 1;
      if (split[i].text == "+" || split[i].text == "-") {
        sign = split[i].text == "-" ? -1 : 1;
        ++i;
      } else if (!first) {
        error(l.number, split[i].col, "expected '+' or '-' before '" + split[i].text + "'");
        return std::nullopt;
      }
      if (i >= split.size()) {
        error(l.number, split.back().col, "dangling sign");
        return std::nullopt;
      }
      Rational coeff = 1;
      std::string atom = "1";
      int col = split[i].col;
      const std::string& head = split[i].text;
      if (std::isdigit(static_cast<unsigned char>(head[0])) || head[0] == '.') {
        try {
          coeff = parse_rational(head);
        } catch (const Error&) {
          error(l.number, split[i].col, "non-rational literal '" + head + "'");
          return std::nullopt;
        }
        ++i;
        if (i < split.size() && split[i].text != "+" && split[i].text != "-") {
          atom = split[i].text;
          col = split[i].col;
          ++i;
        }
      } else {
        atom = head;
        ++i;
      }
      out.push_back({sign * coeff, atom, col});
      first = false;
    }
    return out;
  }

  void parse_space(ExperimentFile& f) {
    if (!has("space")) return;
    std::vector<GradedSpace::Basis> basis;
    std::set<std::string> seen;
    bool convention_set = false;
    for (const auto& l : lines("space")) {
      if (auto kv = key_value(l)) {
        if (kv->first != "parities") {
          error(l.number, column_at(l.text, 0), "unknown key '" + kv->first + "' in [space]");
          continue;
        }
        if (convention_set || !basis.empty()) {
          error(l.number, column_at(l.text, 0), "'parities' must come first and only once");
          continue;
        }
        convention_set = true;
        if (kv->second.text == "V") {
          f.convention = ParityConvention::V;
        } else if (kv->second.text == "PiV") {
          f.convention = ParityConvention::PiV;
        } else {
          error(l.number, kv->second.col, "parities must be 'V' or 'PiV'");
        }
        continue;
      }
      auto toks = split_tokens(l.text);
      if (toks.size() != 2) {
        error(l.number, toks.front().col, "expected '<label> even|odd'");
        continue;
      }
      if (!is_identifier(toks[0].text)) {
        error(l.number, toks[0].col, "invalid label '" + toks[0].text + "'");
        continue;
      }
      if (!seen.insert(toks[0].text).second) {
        error(l.number, toks[0].col, "duplicate basis label '" + toks[0].text + "'");
        continue;
      }
      if (toks[1].text != "even" && toks[1].text != "odd") {
        error(l.number, toks[1].col, "parity must be 'even' or 'odd'");
        continue;
      }
      basis.push_back({toks[0].text, toks[1].text == "odd" ? Parity::odd() : Parity::even()});
    }
    if (basis.empty()) {
      error(header_line("space"), 1, "[space] declares no basis");
      return;
    }
    f.space = std::make_shared<const GradedSpace>(f.convention == ParityConvention::V
                                                      ? GradedSpace::from_v_parities(basis)
                                                      : GradedSpace(basis));
  }

  void parse_algebra(ExperimentFile& f) {
    if (!has("coefficient_algebra")) return;
    std::vector<std::pair<std::string, Parity>> gens;
    std::optional<int> order;
    bool order_given = false;
    std::vector<std::pair<Line, std::size_t>> d_lines;  // line, offset of the value
    const int header = header_line("coefficient_algebra");
    for (const auto& l : lines("coefficient_algebra")) {
      const std::string t = trim(l.text);
      if (t.rfind("d(", 0) == 0) {
        d_lines.push_back({l, 0});
        continue;
      }
      auto kv = key_value(l);
      if (!kv) {
        error(l.number, column_at(l.text, 0), "expected 'generators:', 'order:' or 'd(g) = ...'");
        continue;
      }
      if (kv->first == "generators") {
        std::set<std::string> seen;
        const auto colon = l.text.find(':');
        for (const auto& tok : split_tokens(l.text, colon + 1)) {
          const auto sep = tok.text.find(':');
          const std::string name = tok.text.substr(0, sep);
          const std::string par = sep == std::string::npos ? "" : tok.text.substr(sep + 1);
          if (!is_identifier(name)) {
            error(l.number, tok.col, "invalid generator name '" + name + "'");
          } else if (!seen.insert(name).second) {
            error(l.number, tok.col, "duplicate generator '" + name + "'");
          } else if (par != "even" && par != "odd") {
            error(l.number, tok.col, "expected '<name>:even' or '<name>:odd'");
          } else {
            gens.push_back({name, par == "odd" ? Parity::odd() : Parity::even()});
          }
        }
      } else if (kv->first == "order") {
        order_given = true;
        int value = 0;
        try {
          value = std::stoi(kv->second.text);
        } catch (...) {
        }
        if (value < 1 || std::to_string(value) != kv->second.text)
          error(l.number, kv->second.col, "order must be a positive integer");
        else
          order = value;
      } else {
        error(l.number, column_at(l.text, 0),
              "unknown key '" + kv->first + "' in [coefficient_algebra]");
      }
    }
    if (gens.empty()) {
      error(header, 1, "[coefficient_algebra] needs 'generators:'");
      return;
    }
    if (!order) {
      // an invalid order line is already reported
      if (!order_given) error(header, 1, "[coefficient_algebra] needs 'order:'");
      return;
    }
    std::vector<CoefficientAlgebra::Generator> bare_gens;
    for (const auto& [n, p] : gens) bare_gens.push_back({n, p, 0});
    const CoefficientAlgebra bare(bare_gens, {{*order, false}}, {}, false);
    std::map<std::string, std::string> differential;
    bool ok = true;
    for (const auto& [l, unused] : d_lines) {
      const auto open = l.text.find("d(");
      const auto close = l.text.find(')', open);
      const auto eq = l.text.find('=', close == std::string::npos ? open : close);
      if (close == std::string::npos || eq == std::string::npos) {
        error(l.number, column_at(l.text, 0), "expected 'd(<generator>) = <value>'");
        ok = false;
        continue;
      }
      const std::string g = trim(l.text.substr(open + 2, close - open - 2));
      if (!bare.find_generator(g)) {
        error(l.number, static_cast<int>(open) + 3, "unknown generator '" + g + "'");
        ok = false;
        continue;
      }
      if (differential.count(g)) {
        error(l.number, static_cast<int>(open) + 1, "duplicate differential of '" + g + "'");
        ok = false;
        continue;
      }
      auto terms = combination(l, eq + 1);
      if (!terms) {
        ok = false;
        continue;
      }
      for (const auto& t : *terms) {
        try {
          bare.parse_monomial(t.atom);
        } catch (const Error& e) {
          error(l.number, t.col, e.what());
          ok = false;
        }
      }
      differential[g] = trim(l.text.substr(eq + 1));
    }
    if (!ok) return;
    try {
      f.algebra = CoefficientAlgebra::nilpotent(gens, *order, differential);
    } catch (const Error& e) {
      error(header, 1, std::string("invalid coefficient algebra: ") + e.what());
    }
  }

  void parse_structure(ExperimentFile& f) {
    if (!has("structure")) {
      error(1, 1, "missing [structure] section");
      return;
    }
    const int header = header_line("structure");
    std::optional<Kind> kind;
    bool preset_given = false;
    std::vector<Line> entries;
    for (const auto& l : lines("structure")) {
      const std::string t = trim(l.text);
      if (t.rfind("m(", 0) == 0) {
        entries.push_back(l);
        continue;
      }
      auto kv = key_value(l);
      if (!kv) {
        error(l.number, column_at(l.text, 0), "expected 'preset:', 'kind:' or 'm(...) = ...'");
        continue;
      }
      if (kv->first == "preset") {
        if (f.preset) {
          error(l.number, column_at(l.text, 0), "duplicate preset");
          continue;
        }
        preset_given = true;
        try {
          Preset p = preset(kv->second.text);
          f.preset = kv->second.text;
          f.structure = p.structure;
          preset_pairing_ = p.pairing;
        } catch (const Error& e) {
          error(l.number, kv->second.col, e.what());
        }
      } else if (kv->first == "kind") {
        if (kv->second.text == "linfty") {
          kind = Kind::LInfinity;
        } else if (kv->second.text == "ainfty") {
          kind = Kind::AInfinity;
        } else {
          error(l.number, kv->second.col, "kind must be 'linfty' or 'ainfty'");
        }
      } else {
        error(l.number, column_at(l.text, 0), "unknown key '" + kv->first + "' in [structure]");
      }
    }

    if (f.preset) {
      if (kind || !entries.empty()) {
        const int line = entries.empty() ? header : entries.front().number;
        error(line, 1, "a preset structure takes no 'kind:' or map entries");
      }
      if (f.space && f.structure && !(*f.space == *f.structure->space()))
        error(header_line("space"), 1, "[space] does not match the basis of preset " + *f.preset);
      if (f.structure) f.space = f.structure->space();
      return;
    }
    if (preset_given) return;  // the preset line is already reported
    if (!f.space) {
      error(header, 1, "a structure without preset needs a [space] section");
      return;
    }
    if (!kind) {
      error(header, 1, "[structure] needs 'kind:' or 'preset:'");
      return;
    }
    const GradedSpace& space = *f.space;
    Cochain maps(f.space, CoefficientAlgebra::ground(), flavor_of(*kind));
    std::set<Tuple> seen;
    bool ok = true;
    for (const auto& l : entries) {
      const auto open = l.text.find("m(");
      const auto close = l.text.find(')', open);
      const auto eq = close == std::string::npos ? std::string::npos : l.text.find('=', close);
      if (close == std::string::npos || eq == std::string::npos) {
        error(l.number, column_at(l.text, 0), "expected 'm(<labels>) = <value>'");
        ok = false;
        continue;
      }
      Tuple tuple;
      bool entry_ok = true;
      const std::string inside = l.text.substr(open + 2, close - open - 2);
      if (!trim(inside).empty()) {
        std::size_t pos = open + 2;
        while (true) {
          const auto comma = l.text.find(',', pos);
          const std::size_t end = (comma == std::string::npos || comma > close) ? close : comma;
          const std::string label = trim(l.text.substr(pos, end - pos));
          auto i = space.find(label);
          if (!i) {
            error(l.number, column_at(l.text, pos), "unknown label '" + label + "'");
            entry_ok = false;
          } else {
            tuple.push_back(*i);
          }
          if (end == close) break;
          pos = end + 1;
        }
      }
      auto terms = combination(l, eq + 1);
      if (!terms) entry_ok = false;
      if (!entry_ok) {
        ok = false;
        continue;
      }
      Parity args;
      for (int x : tuple) args += space.parity(x);
      Vector value;
      for (const auto& t : *terms) {
        auto y = space.find(t.atom);
        if (!y) {
          error(l.number, t.col, "unknown label '" + t.atom + "'");
          entry_ok = false;
          continue;
        }
        if (!(args + space.parity(*y)).is_odd()) {
          error(l.number, t.col,
                "parity inconsistency: structure maps are odd, but m" + format_tuple(tuple, space) +
                    " -> " + t.atom + " is even");
          entry_ok = false;
          continue;
        }
        value.add(*y, t.coeff);
      }
      if (!entry_ok) {
        ok = false;
        continue;
      }
      Tuple key = tuple;
      if (maps.flavor() == Flavor::Symmetric && canonicalize(key, space) == 0) {
        if (!value.is_zero()) {
          error(l.number, column_at(l.text, open),
                "symmetric map on a repeated odd label must vanish");
          ok = false;
        }
        continue;
      }
      if (!seen.insert(key).second) {
        error(l.number, column_at(l.text, open), "duplicate entry for m" + format_tuple(key, space));
        ok = false;
        continue;
      }
      maps.add(tuple, value);
    }
    if (ok) f.structure = Structure(*kind, std::move(maps));
  }

  void parse_pairing(ExperimentFile& f) {
    if (!has("pairing") || !f.space) return;
    const GradedSpace& space = *f.space;
    const std::size_t n = space.dim();
    Matrix gram(n, std::vector<Rational>(n, 0));
    std::vector<std::vector<bool>> given(n, std::vector<bool>(n, false));
    bool any = false, ok = true;
    for (const auto& l : lines("pairing")) {
      if (auto kv = key_value(l)) {
        if (kv->first != "from" || kv->second.text != "preset") {
          error(l.number, column_at(l.text, 0), "expected 'from: preset' or '<a>, <b> = <rational>'");
          ok = false;
          continue;
        }
        if (!preset_pairing_) {
          error(l.number, kv->second.col, "the structure has no preset pairing");
          ok = false;
          continue;
        }
        f.pairing_from_preset = true;
        continue;
      }
      const auto comma = l.text.find(',');
      const auto eq = l.text.find('=');
      if (comma == std::string::npos || eq == std::string::npos || eq < comma) {
        error(l.number, column_at(l.text, 0), "expected '<a>, <b> = <rational>'");
        ok = false;
        continue;
      }
      const std::string a = trim(l.text.substr(0, comma));
      const std::string b = trim(l.text.substr(comma + 1, eq - comma - 1));
      auto i = space.find(a);
      auto j = space.find(b);
      if (!i) error(l.number, column_at(l.text, 0), "unknown label '" + a + "'");
      if (!j) error(l.number, column_at(l.text, comma + 1), "unknown label '" + b + "'");
      const std::string value = trim(l.text.substr(eq + 1));
      Rational q;
      try {
        q = parse_rational(value);
      } catch (const Error&) {
        error(l.number, column_at(l.text, eq + 1), "non-rational literal '" + value + "'");
        ok = false;
        continue;
      }
      if (!i || !j) {
        ok = false;
        continue;
      }
      if (given[*i][*j]) {
        error(l.number, column_at(l.text, 0), "duplicate pairing entry (" + a + ", " + b + ")");
        ok = false;
        continue;
      }
      given[*i][*j] = true;
      gram[*i][*j] = q;
      any = true;
    }
    if (!ok) return;
    if (f.pairing_from_preset) {
      if (any) error(header_line("pairing"), 1, "'from: preset' excludes explicit entries");
      else f.pairing = preset_pairing_;
      return;
    }
    // graded symmetry fills the partner of every entry given on one side only
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (given[i][j] && !given[j][i])
          gram[j][i] = sign_of(space.v_parity(i), space.v_parity(j)) * gram[i][j];
    try {
      f.pairing = InnerProduct(f.space, gram);
    } catch (const Error& e) {
      error(header_line("pairing"), 1, std::string("invalid pairing: ") + e.what());
    }
  }

  void parse_candidates(ExperimentFile& f) {
    if (!has("mc_candidates")) return;
    if (!f.algebra) {
      error(header_line("mc_candidates"), 1, "[mc_candidates] needs a [coefficient_algebra] section");
      return;
    }
    if (!f.space) return;
    const GradedSpace& space = *f.space;
    const CoefficientAlgebra& alg = *f.algebra;
    for (const auto& l : lines("mc_candidates")) {
      const auto eq = l.text.find('=');
      const std::string name = eq == std::string::npos ? "" : trim(l.text.substr(0, eq));
      if (eq == std::string::npos || !is_identifier(name)) {
        error(l.number, column_at(l.text, 0), "expected '<name> = <element>'");
        continue;
      }
      if (f.find_candidate(name)) {
        error(l.number, column_at(l.text, 0), "duplicate candidate '" + name + "'");
        continue;
      }
      auto terms = combination(l, eq + 1);
      if (!terms) continue;
      TensorElement value;
      bool ok = true;
      for (const auto& t : *terms) {
        const auto bar = t.atom.find('|');
        const std::string label = t.atom.substr(0, bar);
        auto y = space.find(label);
        if (!y) {
          error(l.number, t.col, "unknown label '" + label + "'");
          ok = false;
          continue;
        }
        Monomial mono = alg.unit();
        if (bar != std::string::npos) {
          try {
            mono = alg.parse_monomial(t.atom.substr(bar + 1));
          } catch (const Error& e) {
            error(l.number, t.col + static_cast<int>(bar) + 1, e.what());
            ok = false;
            continue;
          }
        }
        if (alg.is_unit(mono)) {
          error(l.number, t.col, "candidate term '" + t.atom + "' is not in the augmentation ideal");
          ok = false;
          continue;
        }
        if ((space.parity(*y) + alg.parity(mono)).is_odd()) {
          error(l.number, t.col, "parity inconsistency: candidate term '" + t.atom + "' is odd");
          ok = false;
          continue;
        }
        value.add(*y, mono, t.coeff);
      }
      if (ok) f.candidates.push_back({name, std::move(value)});
    }
  }

  void parse_tasks(ExperimentFile& f) {
    if (!has("tasks")) return;
    for (const auto& l : lines("tasks")) {
      auto toks = split_tokens(l.text);
      const auto& specs = command_specs();
      auto spec = std::find_if(specs.begin(), specs.end(),
                               [&](const CommandSpec& c) { return c.name == toks[0].text; });
      if (spec == specs.end()) {
        error(l.number, toks[0].col, "unknown task '" + toks[0].text + "'");
        continue;
      }
      Task task{toks[0].text, {}, l.number};
      bool ok = true;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const auto eq = toks[i].text.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == toks[i].text.size()) {
          error(l.number, toks[i].col, "expected '<key>=<value>'");
          ok = false;
          continue;
        }
        const std::string key = toks[i].text.substr(0, eq);
        const std::string value = toks[i].text.substr(eq + 1);
        const int vcol = toks[i].col + static_cast<int>(eq) + 1;
        if (std::find(spec->keys.begin(), spec->keys.end(), key) == spec->keys.end()) {
          error(l.number, toks[i].col, "task '" + task.command + "' takes no parameter '" + key + "'");
          ok = false;
          continue;
        }
        if (task.param(key)) {
          error(l.number, toks[i].col, "duplicate parameter '" + key + "'");
          ok = false;
          continue;
        }
        if (auto msg = check_param(f, key, value); !msg.empty()) {
          error(l.number, vcol, msg);
          ok = false;
          continue;
        }
        task.params.emplace_back(key, value);
      }
      for (const auto& r : spec->required)
        if (ok && !task.param(r)) {
          error(l.number, toks[0].col, "task '" + task.command + "' needs '" + r + "='");
          ok = false;
        }
      if (ok) f.tasks.push_back(std::move(task));
    }
  }

 public:
  static std::string check_param(const ExperimentFile& f, const std::string& key,
                                 const std::string& value) {
    if (key == "candidate" || key == "xi" || key == "eta" || key == "twist") {
      if (!f.find_candidate(value)) return "unknown candidate '" + value + "'";
    } else if (key == "variant") {
      try {
        parse_variant(value);
      } catch (const Error& e) {
        return e.what();
      }
    } else if (key == "truncation" || key == "weight" || key == "universal-order") {
      int v = 0;
      try {
        v = std::stoi(value);
      } catch (...) {
        return key + " must be a positive integer";
      }
      if (v < 1 || std::to_string(v) != value) return key + " must be a positive integer";
    } else if (key == "expect") {
      if (value != "pass" && value != "fail") return "expect must be 'pass' or 'fail'";
    }
    return "";
  }

 private:
  std::string source_;
  std::map<std::string, int> headers_;
  std::map<std::string, std::vector<Line>> sections_;
  std::vector<Diagnostic> diags_;
  std::optional<InnerProduct> preset_pairing_;
};

}  // namespace

std::string task_error(const ExperimentFile& f, const Task& t) {
  const auto& specs = command_specs();
  auto spec = std::find_if(specs.begin(), specs.end(),
                           [&](const CommandSpec& c) { return c.name == t.command; });
  if (spec == specs.end()) return "unknown task '" + t.command + "'";
  for (const auto& [k, v] : t.params) {
    if (std::find(spec->keys.begin(), spec->keys.end(), k) == spec->keys.end())
      return "task '" + t.command + "' takes no parameter '" + k + "'";
    if (auto msg = Parser::check_param(f, k, v); !msg.empty()) return msg;
  }
  for (const auto& r : spec->required)
    if (!t.param(r)) return "task '" + t.command + "' needs '" + r + "='";
  return "";
}

std::vector<std::string> task_commands() {
  std::vector<std::string> out;
  for (const auto& s : command_specs()) out.push_back(s.name);
  return out;
}

ExperimentFile parse_experiment(std::string_view text, const std::string& source) {
  return Parser(text, source).run();
}

ExperimentFile load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, {{0, 0, "cannot open file"}});
  std::stringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  return parse_experiment(ss.str(), name);
}

std::string serialize(const ExperimentFile& f) {
  std::ostringstream out;
  const GradedSpace& space = *f.space;
  out << "[space]\n";
  out << "parities: " << (f.convention == ParityConvention::V ? "V" : "PiV") << "\n";
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const Parity p = f.convention == ParityConvention::V ? space.v_parity(i) : space.parity(i);
    out << space.label(i) << " " << (p.is_odd() ? "odd" : "even") << "\n";
  }

  if (f.algebra) {
    const CoefficientAlgebra& alg = *f.algebra;
    out << "\n[coefficient_algebra]\ngenerators:";
    for (std::size_t i = 0; i < alg.num_generators(); ++i)
      out << " " << alg.generator(i).name << ":"
          << (alg.generator(i).parity.is_odd() ? "odd" : "even");
    out << "\norder: " << alg.order() << "\n";
    for (std::size_t i = 0; i < alg.num_generators(); ++i)
      if (!alg.generator_differential(i).empty())
        out << "d(" << alg.generator(i).name << ") = " << alg.format(alg.generator_differential(i))
            << "\n";
  }

  out << "\n[structure]\n";
  if (f.preset) {
    out << "preset: " << *f.preset << "\n";
  } else if (f.structure) {
    const Structure& s = *f.structure;
    out << "kind: " << (s.kind() == Kind::LInfinity ? "linfty" : "ainfty") << "\n";
    std::vector<Tuple> keys;
    for (const auto& [t, v] : s.maps().entries()) keys.push_back(t);
    std::sort(keys.begin(), keys.end(), tuple_less);
    for (const auto& t : keys) {
      std::string args;
      for (std::size_t i = 0; i < t.size(); ++i) args += (i ? ", " : "") + space.label(t[i]);
      out << "m(" << args << ") = " << format(s.maps().value(t), space, *s.algebra()) << "\n";
    }
  }

  if (f.pairing) {
    out << "\n[pairing]\n";
    if (f.pairing_from_preset) {
      out << "from: preset\n";
    } else {
      const Matrix& g = f.pairing->gram();
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i; j < g.size(); ++j)
          if (g[i][j] != 0)
            out << space.label(i) << ", " << space.label(j) << " = " << format_rational(g[i][j])
                << "\n";
    }
  }

  if (!f.candidates.empty()) {
    out << "\n[mc_candidates]\n";
    for (const auto& c : f.candidates)
      out << c.name << " = " << format(c.value, space, *f.algebra) << "\n";
  }

  if (!f.tasks.empty()) {
    out << "\n[tasks]\n";
    for (const auto& t : f.tasks) {
      out << t.command;
      for (const auto& [k, v] : t.params) out << " " << k << "=" << v;
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace linf
