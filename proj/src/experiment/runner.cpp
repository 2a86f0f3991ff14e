#include "feasib/experiment/runner.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace feasib::experiment {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void append_vector(std::string& line, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    line += ',';
    line += num(v[i]);
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

double parse_double(const std::string& cell, int line) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || cell.empty()) {
    throw InvalidInput(fmt::format("trace line {}: '{}' is not a number", line, cell));
  }
  return v;
}

}  // namespace

SolveReport solve(const InstanceConfig& config) {
  validate(config);
  const ConvexBody a = build_body(config.set_a);
  const ConvexBody b = build_body(config.set_b);
  switch (config.solver) {
    case SolverKind::ACondG1:
      return acondg1(a, b, config.x0, make_schedule(config), config.stopping, config.limits);
    case SolverKind::ACondG2:
      return acondg2(a, b, config.x0, *config.y0, make_schedule(config), config.stopping,
                     config.limits);
    case SolverKind::Averaged:
      return averaged_projection(a, b, config.x0, *config.y0, make_schedule(config),
                                 config.stopping, config.limits);
    case SolverKind::ExactAlt1:
      return exact_alternating(a, b, config.x0, config.stopping);
    case SolverKind::ExactAlt2:
      return exact_alternating(a, b, config.x0, config.stopping, config.y0);
  }
  throw InvalidInput("unknown solver");
}

std::string trace_header(int dimension) {
  std::string line = "k";
  for (int i = 1; i <= dimension; ++i) line += fmt::format(",x{}", i);
  for (int i = 1; i <= dimension; ++i) line += fmt::format(",y{}", i);
  line += ",cB_x,cA_y,gamma,theta,lambda,inner_iters";
  return line;
}

std::string trace_row(const SolveReport& report, std::size_t k) {
  std::string line = std::to_string(k);
  append_vector(line, report.x_trace[k]);
  append_vector(line, report.y_trace[k]);
  const RowViolations& v = report.violations[k];
  const ForcingParams& p = report.schedule_trace[k];
  for (double value : {v.c_b_x, v.c_a_y, p.gamma, p.theta, p.lambda}) {
    line += ',';
    line += num(value);
  }
  line += ',';
  line += std::to_string(report.inner_iters[k]);
  return line;
}

std::string trace_csv(const SolveReport& report) {
  const int dim = report.x_trace.empty() ? 0 : static_cast<int>(report.x_trace.front().size());
  std::string out = trace_header(dim) + "\n";
  for (std::size_t k = 0; k < report.x_trace.size(); ++k) out += trace_row(report, k) + "\n";
  return out;
}

std::vector<TraceRow> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("trace is empty (no header)");
  std::vector<std::string> header;
  {
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) header.push_back(cell);
  }
  const int fixed = 7;  // k plus the six trailing columns
  if (header.size() < fixed || (header.size() - fixed) % 2 != 0) {
    throw InvalidInput("trace header has an unexpected column count");
  }
  const int dim = static_cast<int>((header.size() - fixed) / 2);
  if (line != trace_header(dim)) throw InvalidInput("trace header does not match the trace format");

  std::vector<TraceRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream split(line);
    std::string cell;
    while (std::getline(split, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw InvalidInput(fmt::format("trace line {}: expected {} columns", line_no, header.size()));
    }
    TraceRow row;
    row.k = static_cast<int>(parse_double(cells[0], line_no));
    row.x.resize(dim);
    row.y.resize(dim);
    for (int i = 0; i < dim; ++i) {
      row.x[i] = parse_double(cells[1 + i], line_no);
      row.y[i] = parse_double(cells[1 + dim + i], line_no);
    }
    const std::size_t base = 1 + 2 * dim;
    row.c_b_x = parse_double(cells[base], line_no);
    row.c_a_y = parse_double(cells[base + 1], line_no);
    row.params = {parse_double(cells[base + 2], line_no), parse_double(cells[base + 3], line_no),
                  parse_double(cells[base + 4], line_no)};
    row.inner_iters = static_cast<int>(parse_double(cells[base + 5], line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(fmt::format("cannot read trace '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_trace_csv(text.str());
}

std::string summary_json(const InstanceConfig& config, const SolveReport& report, double wall_time) {
  nlohmann::ordered_json doc;
  doc["name"] = config.name;
  doc["solver"] = std::string(to_string(config.solver));
  doc["stop_code"] = std::string(1, stop_letter(report.stop_code));
  doc["stop_reason"] = std::string(to_string(report.stop_code));
  doc["outer_iters"] = report.outer_iters;
  doc["inner_iter_total"] = report.inner_iter_total;
  doc["inner_cap_hits"] = report.inner_cap_hits;
  doc["partial_last_step"] = report.partial_last_step;
  doc["min_violation"] = report.final_violation;
  doc["wall_time"] = wall_time;
  return doc.dump(2) + "\n";
}

RunOutput run_instance(const InstanceConfig& config, const std::filesystem::path& out_dir,
                       std::ostream* echo) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  out.report = solve(config);
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(out_dir);
  out.trace_path = out_dir / (config.name + ".trace.csv");
  out.summary_path = out_dir / (config.name + ".summary.json");

  std::string csv = trace_header(config.dimension) + "\n";
  if (echo) *echo << csv;
  for (std::size_t k = 0; k < out.report.x_trace.size(); ++k) {
    const std::string row = trace_row(out.report, k);
    if (echo) *echo << row << "\n";
    csv += row + "\n";
  }
  write_file(out.trace_path, csv);
  write_file(out.summary_path, summary_json(config, out.report, out.wall_time));
  return out;
}

}  // namespace feasib::experiment
