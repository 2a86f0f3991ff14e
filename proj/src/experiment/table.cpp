#include "feasib/experiment/table.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string_view>
#include <thread>

#include <fmt/format.h>

#include "feasib/experiment/runner.hpp"

namespace feasib::experiment {

namespace {

struct PublishedRow {
  const char* label;
  double parameter;
  PaperCell inexact;
  PaperCell exact;
};

// Stop code, outer iterations and min{c_B(x*), c_A(y*)} as published.
constexpr PublishedRow kTable1[] = {
    {"1.30", 1.30, {'C', 5, 0.0}, {'L', 46, 1.47e-08}},
    {"1.35", 1.35, {'C', 20, 0.0}, {'L', 53, 1.44e-08}},
    {"1.40", 1.40, {'C', 29, 0.0}, {'L', 78, 2.11e-08}},
    {"1.42", 1.42, {'C', 120, 0.0}, {'L', 348, 5.67e-08}},
    {"1.43", 1.43, {'L', 45, 8.73e-03}, {'L', 110, 8.73e-03}},
    {"1.45", 1.45, {'L', 24, 2.87e-02}, {'L', 49, 2.87e-02}},
    {"1.50", 1.50, {'L', 19, 7.87e-02}, {'L', 28, 7.87e-02}},
    {"1.60", 1.60, {'L', 9, 1.79e-01}, {'L', 19, 1.79e-01}},
};

constexpr PublishedRow kTable2[] = {
    {"2.30", 2.30, {'C', 2, 0.0}, {'L', 40, 2.71e-08}},
    {"2.35", 2.35, {'C', 2, 0.0}, {'L', 127, 4.60e-08}},
    {"2.357", 2.357, {'C', 8, 0.0}, {'L', 398, 7.63e-08}},
    {"2.358", 2.358, {'C', 155, 0.0}, {'L', 699, 1.06e-07}},
    {"2.359", 2.359, {'L', 724, 1.50e-04}, {'L', 8378, 7.31e-05}},
    {"2.36", 2.36, {'L', 304, 1.01e-03}, {'L', 1091, 1.00e-03}},
    {"2.40", 2.40, {'L', 23, 4.01e-02}, {'L', 57, 4.01e-02}},
    {"2.50", 2.50, {'L', 15, 1.59e-01}, {'L', 25, 1.59e-01}},
};

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::vector<TableEntry> table_entries(int which) {
  if (which != 1 && which != 2) throw InvalidInput(fmt::format("no table {} (expected 1 or 2)", which));
  std::vector<TableEntry> entries;
  if (which == 1) {
    for (const PublishedRow& row : kTable1) {
      entries.push_back({row.label, table1_instance(row.parameter, SolverKind::ACondG1), row.inexact});
      entries.push_back({row.label, table1_instance(row.parameter, SolverKind::ExactAlt1), row.exact});
    }
  } else {
    for (const PublishedRow& row : kTable2) {
      entries.push_back({row.label, table2_instance(row.parameter, SolverKind::ACondG2), row.inexact});
      entries.push_back({row.label, table2_instance(row.parameter, SolverKind::ExactAlt2), row.exact});
    }
  }
  return entries;
}

std::vector<TableRow> reproduce_table(int which, int threads) {
  if (threads < 1) throw InvalidInput("reproduce_table: thread count must be at least 1");
  const std::vector<TableEntry> entries = table_entries(which);
  std::vector<TableRow> rows(entries.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        const TableEntry& e = entries[i];
        const SolveReport report = solve(e.config);
        rows[i] = {e.instance,
                   std::string(to_string(e.config.solver)),
                   stop_letter(report.stop_code),
                   report.outer_iters,
                   report.final_violation,
                   e.paper.stop_code,
                   e.paper.min_violation};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int n = std::min<int>(threads, static_cast<int>(entries.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::string out = "instance,solver,stop_code,iters,min_violation,paper_stop_code,paper_min_violation\n";
  for (const TableRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.instance, r.solver, r.stop_code, r.iters,
                       fmt_double(r.min_violation), r.paper_stop_code,
                       fmt_double(r.paper_min_violation));
  }
  return out;
}

int threads_from_env() {
  const char* raw = std::getenv("FEASIB_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  const std::string_view text(raw);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
    throw InvalidInput(fmt::format("FEASIB_THREADS must be a positive integer (got '{}')", text));
  }
  return value;
}

}  // namespace feasib::experiment
