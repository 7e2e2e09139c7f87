#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wcsb/config.hpp"

namespace wcsb {

const std::vector<std::string>& experiment_kinds();

struct RunOptions {
  std::string out_dir;               // empty: WCSBURGERS_OUT, then run.out, then "out"
  std::optional<std::uint64_t> seed; // overrides run.seed
  int jobs = 1;
  bool check = false;
};

struct ResultRecord {
  std::string kind;
  Config config;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  std::vector<std::string> failures;  // check violations, empty when the checks pass
  std::vector<std::string> files;     // written data files, relative to out_dir
  std::string out_dir;
  double wall_seconds = 0;

  bool passed() const { return failures.empty(); }
};

// Runs one experiment, writes its CSV files and result.json into the output directory.
// Throws ConfigError for bad configurations and NumericFailure for solver failures.
ResultRecord run_experiment(const std::string& kind, const Config& config, const RunOptions& opt);

std::string resolve_out_dir(const Config& config, const RunOptions& opt);

}  // namespace wcsb
