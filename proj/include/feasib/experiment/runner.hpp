#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "feasib/experiment/config.hpp"

namespace feasib::experiment {

/// One parsed line of a CSV trace.
struct TraceRow {
  int k = 0;
  Vector x;
  Vector y;
  double c_b_x = 0.0;
  double c_a_y = 0.0;
  ForcingParams params;
  int inner_iters = 0;
};

/// Runs the configured solver. Validates first; pure otherwise.
SolveReport solve(const InstanceConfig& config);

/// "k,x1..xn,y1..yn,cB_x,cA_y,gamma,theta,lambda,inner_iters".
std::string trace_header(int dimension);
/// Header plus one row per outer iteration (k = 0 included), numbers to 17 significant digits.
std::string trace_csv(const SolveReport& report);
std::string trace_row(const SolveReport& report, std::size_t k);

std::vector<TraceRow> parse_trace_csv(const std::string& text);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

std::string summary_json(const InstanceConfig& config, const SolveReport& report, double wall_time);

struct RunOutput {
  SolveReport report;
  std::filesystem::path trace_path;
  std::filesystem::path summary_path;
  double wall_time = 0.0;
};

/// Validates, solves, and writes <name>.trace.csv and <name>.summary.json into out_dir.
/// Invalid configs throw ConfigError before any file is created. With `echo`, each trace
/// row is also written there as it is formatted.
RunOutput run_instance(const InstanceConfig& config, const std::filesystem::path& out_dir,
                       std::ostream* echo = nullptr);

}  // namespace feasib::experiment
