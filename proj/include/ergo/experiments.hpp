#pragma once

// Batch experiments driven by one JSON config. Each experiment yields a CSV of
// raw rows, a plot-ready TSV of aggregates and a JSON summary; only the run
// summary (summary.json) carries a timestamp.
//
//   {
//     "seed": 20261015,
//     "c_hat": 1.0,
//     "experiments": [ {"name": "E1-constant", "families": ["gaussian"], ...}, ... ]
//   }
//
// Names: E0-smoke, E1-constant, E2-transference, E3-weak-type,
// E4-metastability, E5-learnable, E6-density.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ergo/json_io.hpp"

namespace ergo {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render(char sep) const;
};

struct ExperimentReport {
  std::string name;
  Table csv;
  Table tsv;
  json summary;
  bool passed = true;
  std::string failure;  // first failing row, empty when passed
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::vector<std::string> only;  // experiment names; empty runs all
};

struct RunResult {
  std::vector<ExperimentReport> reports;
  json summary;
  bool passed = true;
};

const std::vector<std::string>& experiment_names();

/// Validates the whole config up front (ConfigError names the field), then
/// runs the selected experiments in config order.
RunResult run_experiments(const json& config, const RunOptions& options);

/// Writes <name>.csv, <name>.tsv, <name>.json per experiment and summary.json.
void write_reports(const RunResult& result, const std::filesystem::path& out_dir);

// Shortest round-trip text for a double.
std::string format_double(double x);

}  // namespace ergo
