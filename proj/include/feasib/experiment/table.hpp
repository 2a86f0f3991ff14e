#pragma once

#include <string>
#include <vector>

#include "feasib/experiment/config.hpp"

namespace feasib::experiment {

/// Published result for one (instance, solver) cell of the comparison tables.
struct PaperCell {
  char stop_code = '?';
  int iters = 0;
  double min_violation = 0.0;
};

struct TableEntry {
  std::string instance;  ///< parameter label, e.g. "1.30" or "2.357"
  InstanceConfig config;
  PaperCell paper;
};

/// The 16 runs of table 1 (ACondG1 / ExactAlt1 over eight halfspace offsets) or table 2
/// (ACondG2 / ExactAlt2 over eight ellipse shifts), in output order.
std::vector<TableEntry> table_entries(int which);

struct TableRow {
  std::string instance;
  std::string solver;
  char stop_code = '?';
  int iters = 0;
  double min_violation = 0.0;
  char paper_stop_code = '?';
  double paper_min_violation = 0.0;
};

/// Runs every entry with `threads` workers (>= 1). Rows come back in entry order whatever
/// the thread count.
std::vector<TableRow> reproduce_table(int which, int threads = 1);

/// "instance,solver,stop_code,iters,min_violation,paper_stop_code,paper_min_violation".
std::string table_csv(const std::vector<TableRow>& rows);

/// FEASIB_THREADS, or 1 when unset. Throws InvalidInput on a malformed value.
int threads_from_env();

}  // namespace feasib::experiment
