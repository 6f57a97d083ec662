#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linf/structure.hpp"

namespace linf {

struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string message;
};

// "source:line:column: message", or "source: message" without a position
std::string format(const Diagnostic& d, const std::string& source);

class ParseError : public Error {
 public:
  ParseError(std::string source, std::vector<Diagnostic> diagnostics);
  const std::string& source() const { return source_; }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::string source_;
  std::vector<Diagnostic> diagnostics_;
};

struct Candidate {
  std::string name;
  TensorElement value;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Task {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;  // in file order
  int line = 0;

  std::optional<std::string> param(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  friend bool operator==(const Task& a, const Task& b) {
    return a.command == b.command && a.params == b.params;
  }
};

enum class ParityConvention { V, PiV };

struct ExperimentFile {
  std::string source;  // name used in diagnostics and reports
  ParityConvention convention = ParityConvention::V;
  SpacePtr space;
  std::optional<std::string> preset;  // structure given by preset name
  std::optional<Structure> structure;
  bool pairing_from_preset = false;
  std::optional<InnerProduct> pairing;
  AlgebraPtr algebra;  // null without a [coefficient_algebra] section
  std::vector<Candidate> candidates;
  std::vector<Task> tasks;

  const Candidate* find_candidate(const std::string& name) const;
};

// Equality of the parsed model; the source name is not part of it.
bool operator==(const ExperimentFile& a, const ExperimentFile& b);

std::vector<std::string> task_commands();
// Empty when the task's command, parameter names and values are valid for the file.
std::string task_error(const ExperimentFile& f, const Task& t);

ExperimentFile parse_experiment(std::string_view text, const std::string& source = "<input>");
ExperimentFile load_experiment(const std::string& path);
std::string serialize(const ExperimentFile& f);

}  // namespace linf
