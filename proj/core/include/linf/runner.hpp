#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linf/experiment.hpp"

namespace linf {

enum class Status { Pass = 0, Fail = 1, InputError = 2 };

// Command-line overrides; a set value replaces the task's parameter.
struct RunOptions {
  std::optional<int> truncation;
  std::optional<int> weight;
  std::optional<int> universal_order;
};

struct RunDefaults {
  static constexpr int truncation = 3;
  static constexpr int weight = 4;
  static constexpr int universal_order = 3;
};

struct TaskResult {
  Status status = Status::Pass;
  std::string body;  // report lines, each ending in '\n'
};

struct RunResult {
  Status status = Status::Pass;
  std::string report;
};

TaskResult run_task(const ExperimentFile& f, const Task& task, const RunOptions& options = {});

// Runs the tasks in order. The report is byte-identical for identical inputs.
RunResult run_tasks(const ExperimentFile& f, const std::vector<Task>& tasks,
                    const RunOptions& options = {});

// The file's tasks with the given command, or one default task when there are none.
std::vector<Task> tasks_for(const ExperimentFile& f, const std::string& command);

int exit_code(Status s);

}  // namespace linf
