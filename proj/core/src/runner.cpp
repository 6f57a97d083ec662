#include "linf/runner.hpp"

#include <algorithm>
#include <sstream>

#include "linf/complexes.hpp"
#include "linf/fiber.hpp"
#include "linf/mc.hpp"
#include "linf/morphisms.hpp"

namespace linf {

int exit_code(Status s) { return static_cast<int>(s); }

namespace {

struct InputError : Error {
  using Error::Error;
};

class Context {
 public:
  Context(const ExperimentFile& f, const Task& t, const RunOptions& o) : f_(f), t_(t), o_(o) {}

  const Structure& structure() const { return *f_.structure; }
  const GradedSpace& space() const { return *f_.space; }

  int integer(const std::string& key, std::optional<int> override, int fallback) const {
    if (override) return *override;
    if (auto v = t_.param(key)) return std::stoi(*v);
    return fallback;
  }
  int truncation() const { return integer("truncation", o_.truncation, RunDefaults::truncation); }
  int weight() const { return integer("weight", o_.weight, RunDefaults::weight); }
  int universal_order() const {
    return integer("universal-order", o_.universal_order, RunDefaults::universal_order);
  }

  Variant variant(bool truncated_default) const {
    if (auto v = t_.param("variant")) return parse_variant(*v);
    const bool l = structure().kind() == Kind::LInfinity;
    if (truncated_default) return l ? Variant::CE_trunc : Variant::Hoch_trunc;
    return l ? Variant::CE : Variant::Hoch;
  }

  const AlgebraPtr& algebra() const {
    if (!f_.algebra) throw InputError("task '" + t_.command + "' needs a [coefficient_algebra] section");
    return f_.algebra;
  }

  bool has_pairing() const { return f_.pairing.has_value(); }
  bool has_param(const std::string& key) const { return t_.param(key).has_value(); }

  const InnerProduct& pairing() const {
    if (!f_.pairing) throw InputError("task '" + t_.command + "' needs a [pairing] section");
    return *f_.pairing;
  }
  std::optional<InnerProduct> pairing_for(Variant v) const {
    if (!is_cyclic(v)) return std::nullopt;
    return pairing();
  }

  const Candidate& candidate(const std::string& key) const {
    auto name = t_.param(key);
    if (!name) throw InputError("task '" + t_.command + "' needs '" + key + "='");
    const Candidate* c = f_.find_candidate(*name);
    if (!c) throw InputError("unknown candidate '" + *name + "'");
    return *c;
  }

  // The named candidate, or every candidate of the file.
  std::vector<const Candidate*> candidates(const std::string& key) const {
    algebra();
    if (t_.param(key)) return {&candidate(key)};
    if (f_.candidates.empty())
      throw InputError("task '" + t_.command + "' needs an [mc_candidates] section");
    std::vector<const Candidate*> out;
    for (const auto& c : f_.candidates) out.push_back(&c);
    return out;
  }

  std::string format(const TensorElement& t) const { return linf::format(t, space(), *algebra()); }

 private:
  const ExperimentFile& f_;
  const Task& t_;
  const RunOptions& o_;
};

const char* flag(bool b) { return b ? "pass" : "FAIL"; }

std::string format_maps(const Cochain& c) {
  std::vector<Tuple> keys;
  for (const auto& [t, v] : c.entries()) keys.push_back(t);
  std::sort(keys.begin(), keys.end(), tuple_less);
  std::string out;
  for (const auto& t : keys)
    out += "    m" + format_tuple(t, *c.space()) + " = " +
           format(c.value(t), *c.space(), *c.algebra()) + "\n";
  return out;
}

bool run_verify(const Context& cx, std::ostream& os) {
  const RelationReport r = verify(cx.structure());
  os << "  " << kind_name(cx.structure().kind()) << ": " << describe(r, cx.structure()) << "\n";
  return r.ok;
}

bool run_cyclic_verify(const Context& cx, std::ostream& os) {
  const CyclicReport r = verify_cyclic(cx.structure(), cx.pairing());
  os << "  " << describe(r, cx.structure()) << "\n";
  return r.ok;
}

bool run_mc_check(const Context& cx, std::ostream& os) {
  bool ok = true;
  for (const Candidate* c : cx.candidates("candidate")) {
    const TensorElement d = mc_defect(cx.structure(), c->value, cx.algebra());
    const AlgebraMapReport sq = mc_to_algebra_map(cx.structure(), c->value, cx.algebra());
    os << "  " << c->name << " = " << cx.format(c->value) << "\n";
    if (d.is_zero()) {
      os << "    MC; algebra map square commutes: " << (sq.ok ? "yes" : "no") << "\n";
    } else {
      os << "    not MC; defect " << cx.format(d) << "\n";
      os << "    algebra map square defect equals the MC defect: "
         << (sq.defect == d ? "yes" : "no") << "\n";
    }
    ok = ok && d.is_zero() && sq.ok;
  }
  return ok;
}

bool run_twist(const Context& cx, std::ostream& os) {
  bool ok = true;
  const Structure& s = cx.structure();
  for (const Candidate* c : cx.candidates("candidate")) {
    os << "  " << c->name << " = " << cx.format(c->value) << "\n";
    const TensorElement d = mc_defect(s, c->value, cx.algebra());
    if (!d.is_zero()) {
      os << "    not MC; defect " << cx.format(d) << "\n";
      ok = false;
      continue;
    }
    const Structure tw = twist(s, c->value, cx.algebra());
    const RelationReport rel = verify(tw);
    const bool agree = conjugate_derivation(s, c->value, cx.algebra()) == tw.maps();
    os << "    twisted maps:\n" << format_maps(tw.maps());
    os << "    relations: " << describe(rel, tw) << "\n";
    os << "    argument-shift construction agrees: " << (agree ? "yes" : "no") << "\n";
    bool cyc = true;
    if (cx.has_pairing()) {
      const CyclicTwistReport r = check_cyclic_twist(s, cx.pairing(), c->value, cx.algebra());
      os << "    twisted structure cyclic: " << (r.ok ? "yes" : "no " + r.message) << "\n";
      cyc = r.ok;
    }
    ok = ok && rel.ok && agree && cyc;
  }
  return ok;
}

bool run_shift_check(const Context& cx, std::ostream& os) {
  const Structure& s = cx.structure();
  const Candidate& xi = cx.candidate("xi");
  const Candidate& eta = cx.candidate("eta");
  const TensorElement dxi = mc_defect(s, xi.value, cx.algebra());
  if (!dxi.is_zero()) {
    os << "  " << xi.name << " is not MC; defect " << cx.format(dxi) << "\n";
    return false;
  }
  const Structure tw = twist(s, xi.value, cx.algebra());
  const TensorElement shifted = shift_mc(s, xi.value, eta.value, cx.algebra());
  const TensorElement d1 = mc_defect(s, eta.value, cx.algebra());
  const TensorElement d2 = mc_defect(tw, shifted, cx.algebra());
  os << "  " << eta.name << " MC in V: " << (d1.is_zero() ? "yes" : "no (defect " + cx.format(d1) + ")")
     << "\n";
  os << "  " << eta.name << " - " << xi.name << " = " << cx.format(shifted) << "\n";
  os << "  MC in the twisted structure: "
     << (d2.is_zero() ? "yes" : "no (defect " + cx.format(d2) + ")") << "\n";
  const bool ok = d1.is_zero() == d2.is_zero();
  os << "  correspondence " << (ok ? "holds" : "FAILS") << "\n";
  return ok;
}

bool run_homology(const Context& cx, std::ostream& os) {
  const Variant v = cx.variant(false);
  const ComplexSpec spec = make_complex(v, cx.structure(), cx.pairing_for(v), cx.truncation());
  std::istringstream table(format_betti(homology(spec)));
  for (std::string line; std::getline(table, line);) os << "  " << line << "\n";
  return true;
}

bool run_morphism_check(const Context& cx, std::ostream& os, const ExperimentFile& f) {
  const Variant v = cx.variant(true);
  const int n = cx.truncation();
  const LInfinityMorphism m = build_f(cx.structure(), v, cx.pairing_for(v));
  std::vector<TestPair> battery;
  if (f.algebra)
    for (const auto& c : f.candidates) battery.push_back({c.name, f.algebra, c.value});
  battery.push_back(universal_pair(cx.structure(), cx.universal_order()));
  const MorphismReport r = verify_morphism(m, battery, n);
  os << "  target " << variant_name(v) << " truncation " << n << ", " << m.components.size()
     << " components";
  if (is_cyclic(v)) os << ", values cyclic " << (m.values_cyclic ? "yes" : "no");
  os << "\n";
  std::istringstream lines(describe(r));
  for (std::string line; std::getline(lines, line);) os << "  " << line << "\n";
  bool ok = r.ok && m.values_cyclic;
  if (cx.structure().kind() == Kind::AInfinity && !is_cyclic(v)) {
    const CompatibilityReport sq = compatibility_square(cx.structure());
    os << "  compatibility square with the symmetrized structure: " << flag(sq.ok) << " ("
       << sq.entries << " entries)";
    if (!sq.ok) os << " " << sq.discrepancy;
    os << "\n";
    ok = ok && sq.ok;
  }
  return ok;
}

bool run_chi_check(const Context& cx, std::ostream& os) {
  const Variant v = cx.variant(true);
  const CurvedMorphism chi = build_chi(cx.structure(), v, cx.pairing_for(v));
  const ChiReport r = verify_chi_chain_map(chi, cx.weight(), cx.truncation());
  os << "  target " << variant_name(v) << " weight " << cx.weight() << " truncation "
     << cx.truncation() << "\n";
  os << "  " << describe(r, cx.space()) << "\n";
  return r.ok;
}

bool run_fiber_check(const Context& cx, std::ostream& os) {
  const FiberReport r = certify_fiber_sequence(cx.structure(), cx.truncation());
  std::istringstream lines(describe(r));
  for (std::string line; std::getline(lines, line);) os << "  " << line << "\n";
  const AlphaReport a = check_alpha(cx.structure(), cx.universal_order(), cx.truncation());
  os << "  alpha_z at universal order " << cx.universal_order() << ": mc " << flag(a.mc)
     << ", relations " << flag(a.relations) << ", z=0 " << flag(a.endpoint0) << ", z=1 "
     << flag(a.endpoint1) << ", nullhomotopy " << flag(a.matches_s) << "\n";
  if (!a.detail.empty()) os << "  " << a.detail << "\n";
  return r.ok() && a.ok();
}

bool run_gauge_check(const Context& cx, std::ostream& os) {
  const Structure& g = cx.structure();
  const Candidate& xi = cx.candidate("xi");
  const Candidate& by = cx.has_param("twist") ? cx.candidate("twist") : xi;
  const Structure f = twist_unchecked(g, by.value, cx.algebra());
  os << "  f = m twisted by " << by.name << ", g = m, xi = " << xi.name << "\n";
  const GaugeReport r = gauge_homotopy_check(f, g, xi.value, cx.algebra());
  os << "  f = e^xi g e^-xi: " << (r.ok ? "yes" : "no");
  if (!r.detail.empty()) os << " (" << r.detail << ")";
  os << "\n";
  if (r.ok)
    os << "  family e^(z xi) g e^(-z xi) + xi dz: relations " << flag(r.family_relations)
       << ", endpoints " << flag(r.endpoints) << "\n";
  return r.ok && r.family_relations && r.endpoints;
}

}  // namespace

TaskResult run_task(const ExperimentFile& f, const Task& task, const RunOptions& options) {
  TaskResult result;
  std::ostringstream os;
  if (auto msg = task_error(f, task); !msg.empty()) {
    result.status = Status::InputError;
    result.body = "  input error: " + msg + "\n";
    return result;
  }
  const Context cx(f, task, options);
  bool ok = false;
  try {
    const std::string& c = task.command;
    if (c == "verify") ok = run_verify(cx, os);
    else if (c == "cyclic-verify") ok = run_cyclic_verify(cx, os);
    else if (c == "mc-check") ok = run_mc_check(cx, os);
    else if (c == "twist") ok = run_twist(cx, os);
    else if (c == "shift-check") ok = run_shift_check(cx, os);
    else if (c == "homology") ok = run_homology(cx, os);
    else if (c == "morphism-check") ok = run_morphism_check(cx, os, f);
    else if (c == "chi-check") ok = run_chi_check(cx, os);
    else if (c == "fiber-check") ok = run_fiber_check(cx, os);
    else if (c == "gauge-check") ok = run_gauge_check(cx, os);
  } catch (const Error& e) {
    result.status = Status::InputError;
    result.body = os.str() + "  input error: " + e.what() + "\n";
    return result;
  }
  const bool expect_fail = task.param("expect") == std::optional<std::string>("fail");
  if (expect_fail) {
    os << "  result: " << (ok ? "FAIL (expected a failure)" : "pass (failure expected)") << "\n";
    result.status = ok ? Status::Fail : Status::Pass;
  } else {
    os << "  result: " << (ok ? "pass" : "FAIL") << "\n";
    result.status = ok ? Status::Pass : Status::Fail;
  }
  result.body = os.str();
  return result;
}

RunResult run_tasks(const ExperimentFile& f, const std::vector<Task>& tasks,
                    const RunOptions& options) {
  RunResult r;
  std::ostringstream os;
  os << "file " << f.source << "\n";
  int pass = 0, fail = 0, errors = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    os << "task " << i + 1 << ": " << t.command;
    for (const auto& [k, v] : t.params) os << " " << k << "=" << v;
    os << "\n";
    const TaskResult tr = run_task(f, t, options);
    os << tr.body;
    if (tr.status == Status::Pass) ++pass;
    if (tr.status == Status::Fail) ++fail;
    if (tr.status == Status::InputError) ++errors;
  }
  os << "summary: " << tasks.size() << " tasks, " << pass << " pass, " << fail << " fail, " << errors
     << " input errors\n";
  r.status = errors ? Status::InputError : fail ? Status::Fail : Status::Pass;
  r.report = os.str();
  return r;
}

std::vector<Task> tasks_for(const ExperimentFile& f, const std::string& command) {
  std::vector<Task> out;
  for (const auto& t : f.tasks)
    if (t.command == command) out.push_back(t);
  if (out.empty()) out.push_back({command, {}, 0});
  return out;
}

}  // namespace linf
