#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "feasib/condg.hpp"
#include "feasib/schedule.hpp"

namespace feasib {

struct StoppingConfig {
  double eps_feas = 1e-8;
  double eps_lack = 1e-8;
  int max_outer_iters = 100000;
  /// Consecutive iterations with both moves <= eps_lack before LackOfProgress.
  int lack_streak = 2;

  void validate() const;
};

enum class StopCode { ConvergedFeasible, LackOfProgress, IterationCap };

std::string_view to_string(StopCode code);
/// "C", "L" or "I".
char stop_letter(StopCode code);

/// Feasibility violations recorded for one trace row.
struct RowViolations {
  double c_b_x = 0.0;  ///< violation of the x iterate with respect to B
  double c_a_y = 0.0;  ///< violation of the y iterate with respect to A
};

/// Outer-loop trace. Row k holds (x^k, y^k), their cross violations, the forcing
/// parameters in force at iteration k, and the inner iterations spent producing row k.
struct SolveReport {
  std::vector<Vector> x_trace;
  std::vector<Vector> y_trace;
  std::vector<RowViolations> violations;
  std::vector<ForcingParams> schedule_trace;
  std::vector<int> inner_iters;

  StopCode stop_code = StopCode::IterationCap;
  int outer_iters = 0;
  long inner_iter_total = 0;
  /// Inner CondG calls that ended on their iteration cap.
  int inner_cap_hits = 0;
  /// True when the run stopped right after the B-step of its last iteration, so the
  /// final x row repeats x^k.
  bool partial_last_step = false;
  /// min{c_B(x), c_A(y)} at the final row for the alternating schemes;
  /// max{c_A(z), c_B(z)} at the final average for averaged projections.
  double final_violation = 0.0;

  const Vector& x_last() const { return x_trace.back(); }
  const Vector& y_last() const { return y_trace.back(); }
};

/// Exact projection onto B, then a CondG inexact projection onto the compact A anchored at
/// the previous x. Row 0 records y^0 := P_B(x0) for bookkeeping only.
///
/// Throws InvalidInput if x0 is not in A or the schedule breaks the one-set conditions,
/// UnsupportedOperation if A is not compact.
SolveReport acondg1(const ConvexBody& a, const ConvexBody& b, const Vector& x0,
                    const ForcingSchedule& schedule, const StoppingConfig& stop = {},
                    const CondGLimits& limits = {});

/// CondG inexact projections onto both compact sets: y^{k+1} from (y^k, x^k), then
/// x^{k+1} from (x^k, y^{k+1}).
SolveReport acondg2(const ConvexBody& a, const ConvexBody& b, const Vector& x0, const Vector& y0,
                    const ForcingSchedule& schedule, const StoppingConfig& stop = {},
                    const CondGLimits& limits = {});

/// Averaged inexact projections: z^{k+1} = (CondG_A(x^k, z^k) + CondG_B(y^k, z^k)) / 2 with
/// z^0 = (x0 + y0) / 2. The two CondG outputs become the next anchors x^{k+1}, y^{k+1} and
/// fill x_trace / y_trace, so z^k is always the midpoint of row k. Stops once z^k is within
/// eps_feas of both sets, or on lack of progress in z^k.
SolveReport averaged_projection(const ConvexBody& a, const ConvexBody& b, const Vector& x0,
                                const Vector& y0, const ForcingSchedule& schedule,
                                const StoppingConfig& stop = {}, const CondGLimits& limits = {});

/// Classical alternating projections y^{k+1} = P_B(x^k), x^{k+1} = P_A(y^{k+1}) with the same
/// stopping rules. With `y0` the start also checks y0 in A (two-set baseline); without it,
/// y^0 := P_B(x0).
SolveReport exact_alternating(const ConvexBody& a, const ConvexBody& b, const Vector& x0,
                              const StoppingConfig& stop = {},
                              const std::optional<Vector>& y0 = std::nullopt);

/// z^k of an averaged_projection report.
std::vector<Vector> midpoints(const SolveReport& report);

}  // namespace feasib
