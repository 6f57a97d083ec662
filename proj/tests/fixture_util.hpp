#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "linf/experiment.hpp"

inline std::string fixture_path(const std::string& name) {
  return std::string(LINF_FIXTURE_DIR) + "/" + name;
}

// Every *.alg fixture, sorted by file name.
inline std::vector<linf::ExperimentFile> all_fixtures() {
  std::vector<std::string> paths;
  for (const auto& e : std::filesystem::directory_iterator(LINF_FIXTURE_DIR))
    if (e.path().extension() == ".alg") paths.push_back(e.path().string());
  std::sort(paths.begin(), paths.end());
  std::vector<linf::ExperimentFile> out;
  for (const auto& p : paths) out.push_back(linf::load_experiment(p));
  return out;
}
