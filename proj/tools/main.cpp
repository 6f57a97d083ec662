#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "linf/experiment.hpp"
#include "linf/runner.hpp"

namespace {

struct Options {
  std::string file;
  std::string report;
  std::optional<int> truncation, weight, universal_order;
  std::map<std::string, std::string> params;  // task parameter overrides
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("file", o.file, "experiment file (.alg)")->required();
  sub->add_option("--truncation", o.truncation, "arity truncation N")->check(CLI::PositiveNumber);
  sub->add_option("--weight", o.weight, "word weight bound W (chi-check)")->check(CLI::PositiveNumber);
  sub->add_option("--universal-order", o.universal_order,
                  "order of the universal algebra quotient")
      ->check(CLI::PositiveNumber);
  sub->add_option("--report", o.report, "also write the report to this path");
}

void add_param(CLI::App* sub, Options& o, const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(
      "--" + key, [&o, key](const std::string& v) { o.params[key] = v; }, help);
}

int emit(const linf::RunResult& r, const Options& o) {
  std::cout << r.report;
  if (!o.report.empty()) {
    std::ofstream out(o.report, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write report to " << o.report << "\n";
      return 2;
    }
    out << r.report;
  }
  return linf::exit_code(r.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of L-infinity and A-infinity structures"};
  app.require_subcommand(1);
  Options o;

  std::map<std::string, std::vector<std::string>> params = {
      {"verify", {}},
      {"cyclic-verify", {}},
      {"mc-check", {"candidate"}},
      {"twist", {"candidate"}},
      {"shift-check", {"xi", "eta"}},
      {"homology", {"variant"}},
      {"morphism-check", {"variant"}},
      {"chi-check", {"variant"}},
      {"fiber-check", {}},
      {"gauge-check", {"xi", "twist"}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& command : linf::task_commands()) {
    CLI::App* sub = app.add_subcommand(command, "run the " + command + " task");
    add_common(sub, o);
    for (const auto& key : params[command]) add_param(sub, o, key, key + " parameter");
    add_param(sub, o, "expect", "pass or fail");
    subs[command] = sub;
  }
  CLI::App* run = app.add_subcommand("run", "run the task list of the file");
  add_common(run, o);
  CLI::App* canon = app.add_subcommand("serialize", "print the file in canonical form");
  canon->add_option("file", o.file, "experiment file (.alg)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  linf::ExperimentFile file;
  try {
    file = linf::load_experiment(o.file);
  } catch (const linf::ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << linf::format(d, e.source()) << "\n";
    return 2;
  } catch (const linf::Error& e) {
    std::cerr << o.file << ": " << e.what() << "\n";
    return 2;
  }

  if (canon->parsed()) {
    std::cout << linf::serialize(file);
    return 0;
  }

  const linf::RunOptions options{o.truncation, o.weight, o.universal_order};
  if (run->parsed()) return emit(linf::run_tasks(file, file.tasks, options), o);

  for (const auto& [command, sub] : subs) {
    if (!sub->parsed()) continue;
    auto tasks = linf::tasks_for(file, command);
    for (auto& t : tasks)
      for (const auto& [k, v] : o.params) t.set(k, v);
    return emit(linf::run_tasks(file, tasks, options), o);
  }
  return 2;
}
