// feasib: run instances, reproduce the comparison tables, draw traces.
//
//   feasib run   --config <path> [--out-dir <dir>] [--verbose]
//   feasib table --which {1|2} [--out-dir <dir>]
//   feasib plot  --trace <csv> --config <path> --out <svg>
//
// Exit codes: 0 success, 2 invalid input, 3 a run hit its outer iteration cap, 1 other errors.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "feasib/experiment/figure.hpp"
#include "feasib/experiment/runner.hpp"
#include "feasib/experiment/table.hpp"

namespace fx = feasib::experiment;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIterationCap = 3;

int run_command(const std::string& config_path, const std::string& out_dir, bool verbose) {
  const fx::InstanceConfig config = fx::load_config(config_path);
  const fx::RunOutput out = fx::run_instance(config, out_dir, verbose ? &std::cout : nullptr);
  const feasib::SolveReport& r = out.report;
  std::cerr << fmt::format("{}: {} after {} iterations, min violation {:.6e} ({:.3f} s)\n",
                           config.name, to_string(r.stop_code), r.outer_iters, r.final_violation,
                           out.wall_time);
  std::cerr << fmt::format("trace: {}\nsummary: {}\n", out.trace_path.string(),
                           out.summary_path.string());
  return r.stop_code == feasib::StopCode::IterationCap ? kExitIterationCap : kExitOk;
}

int table_command(int which, const std::string& out_dir) {
  const std::vector<fx::TableRow> rows = fx::reproduce_table(which, fx::threads_from_env());
  const std::string csv = fx::table_csv(rows);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path path = std::filesystem::path(out_dir) / fmt::format("table{}.csv", which);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  file << csv;
  std::cout << csv;
  std::cerr << fmt::format("wrote {}\n", path.string());
  bool capped = false;
  for (const fx::TableRow& row : rows) capped = capped || row.stop_code == 'I';
  return capped ? kExitIterationCap : kExitOk;
}

int plot_command(const std::string& trace, const std::string& config_path, const std::string& out) {
  fx::render_figure(trace, fx::load_config(config_path), out);
  std::cerr << fmt::format("wrote {}\n", out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alternating conditional-gradient feasibility experiments"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Echo per-iteration trace rows");

  std::string config_path;
  std::string out_dir = ".";
  auto* run = app.add_subcommand("run", "Solve one instance and write its trace and summary");
  run->add_option("--config", config_path, "Instance config (JSON)")->required();
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_flag("-v,--verbose", verbose, "Echo per-iteration trace rows");

  int which = 1;
  std::string table_dir = ".";
  auto* table = app.add_subcommand("table", "Reproduce comparison table 1 or 2");
  table->add_option("--which", which, "Table number")->required()->check(CLI::IsMember({1, 2}));
  table->add_option("--out-dir", table_dir, "Output directory");

  std::string trace_path;
  std::string plot_config;
  std::string svg_out;
  auto* plot = app.add_subcommand("plot", "Draw a trace over its sets as SVG");
  plot->add_option("--trace", trace_path, "Trace CSV")->required();
  plot->add_option("--config", plot_config, "Instance config (JSON)")->required();
  plot->add_option("--out", svg_out, "SVG output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run) return run_command(config_path, out_dir, verbose);
    if (*table) return table_command(which, table_dir);
    if (*plot) return plot_command(trace_path, plot_config, svg_out);
  } catch (const feasib::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const feasib::UnsupportedOperation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
