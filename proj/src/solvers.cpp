#include "feasib/solvers.hpp"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

namespace feasib {

namespace {

constexpr double kStartMembershipTol = 1e-10;

struct StepOutput {
  Vector point;
  int inner_iters = 0;
  bool capped = false;
};

// (anchor in the target set, point being projected, forcing parameters) -> new member.
using ProjectionStep =
    std::function<StepOutput(const Vector& anchor, const Vector& target, const ForcingParams&)>;

ProjectionStep condg_step(const ConvexBody& body, const CondGLimits& limits) {
  return [&body, limits](const Vector& anchor, const Vector& target, const ForcingParams& p) {
    CondGResult r = condg_project(body, p, anchor, target, limits);
    return StepOutput{std::move(r.w_plus), r.inner_iters,
                      r.stop_reason == CondGStop::IterationCap};
  };
}

ProjectionStep exact_step(const ConvexBody& body) {
  return [&body](const Vector&, const Vector& target, const ForcingParams&) {
    return StepOutput{exact_project(body, target), 0, false};
  };
}

void require_start(const ConvexBody& body, const Vector& p, const char* name, const char* set) {
  if (p.size() != body.dimension()) {
    throw InvalidInput(fmt::format("{}: dimension {} does not match set {} ({})", name, p.size(),
                                   set, body.dimension()));
  }
  require_finite(p, name);
  if (violation(body, p) > kStartMembershipTol) {
    throw InvalidInput(fmt::format("{} is not a member of set {}", name, set));
  }
}

void require_same_space(const ConvexBody& a, const ConvexBody& b) {
  if (a.dimension() != b.dimension()) {
    throw InvalidInput(fmt::format("sets live in different dimensions ({} vs {})", a.dimension(),
                                   b.dimension()));
  }
}

void require_compact(const ConvexBody& body, const char* set) {
  if (!body.is_compact()) {
    throw UnsupportedOperation(fmt::format("set {} must be compact (got {})", set, body.kind_name()));
  }
}

void push_row(SolveReport& report, Vector x, Vector y, RowViolations v, const ForcingParams& p,
              int inner) {
  report.x_trace.push_back(std::move(x));
  report.y_trace.push_back(std::move(y));
  report.violations.push_back(v);
  report.schedule_trace.push_back(p);
  report.inner_iters.push_back(inner);
  report.inner_iter_total += inner;
}

void finish(SolveReport& report, StopCode code) {
  report.stop_code = code;
  report.outer_iters = static_cast<int>(report.x_trace.size()) - 1;
  const RowViolations& last = report.violations.back();
  report.final_violation = std::min(last.c_b_x, last.c_a_y);
}

// Alternating driver shared by the inexact schemes and the exact baseline:
//   y^{k+1} = step_b(y^k, x^k),  stop if y^{k+1} in A
//   x^{k+1} = step_a(x^k, y^{k+1}),  stop if x^{k+1} in B
// followed by the lack-of-progress test and the schedule update.
SolveReport run_alternating(const ConvexBody& a, const ConvexBody& b, const Vector& x0,
                            const Vector& y0, bool check_y0, const ProjectionStep& step_b,
                            const ProjectionStep& step_a, ForcingSchedule schedule,
                            const StoppingConfig& stop) {
  SolveReport report;
  RowViolations row{violation(b, x0), violation(a, y0)};
  push_row(report, x0, y0, row, schedule.current(), 0);

  if (row.c_b_x <= stop.eps_feas || (check_y0 && row.c_a_y <= stop.eps_feas)) {
    finish(report, StopCode::ConvergedFeasible);
    return report;
  }

  Vector x = x0;
  Vector y = y0;
  int lack_streak = 0;
  for (int k = 0;; ++k) {
    if (k >= stop.max_outer_iters) {
      finish(report, StopCode::IterationCap);
      return report;
    }
    const ForcingParams params = schedule.current();

    StepOutput y_step = step_b(y, x, params);
    report.inner_cap_hits += y_step.capped ? 1 : 0;
    const double c_a = violation(a, y_step.point);
    if (c_a <= stop.eps_feas) {
      push_row(report, x, std::move(y_step.point), {row.c_b_x, c_a}, params, y_step.inner_iters);
      report.partial_last_step = true;
      finish(report, StopCode::ConvergedFeasible);
      return report;
    }

    StepOutput x_step = step_a(x, y_step.point, params);
    report.inner_cap_hits += x_step.capped ? 1 : 0;
    const double c_b = violation(b, x_step.point);
    const int inner = y_step.inner_iters + x_step.inner_iters;

    const bool stalled = max_abs_diff(x_step.point, x) <= stop.eps_lack &&
                         max_abs_diff(y_step.point, y) <= stop.eps_lack;
    lack_streak = stalled ? lack_streak + 1 : 0;

    x = std::move(x_step.point);
    y = std::move(y_step.point);
    const RowViolations next{c_b, c_a};
    // Without a starting y there is no c_A(y^0) to compare against; the first update waits.
    if (k > 0 || check_y0) schedule = schedule_update(schedule, row.c_b_x, c_b, row.c_a_y, c_a);
    row = next;
    push_row(report, x, y, next, schedule.current(), inner);

    if (c_b <= stop.eps_feas) {
      finish(report, StopCode::ConvergedFeasible);
      return report;
    }
    if (lack_streak >= stop.lack_streak) {
      finish(report, StopCode::LackOfProgress);
      return report;
    }
  }
}

}  // namespace

void StoppingConfig::validate() const {
  if (!(eps_feas > 0.0)) throw InvalidInput("eps_feas must be positive");
  if (!(eps_lack > 0.0)) throw InvalidInput("eps_lack must be positive");
  if (max_outer_iters < 1) throw InvalidInput("max_outer_iters must be positive");
  if (lack_streak < 1) throw InvalidInput("lack_streak must be positive");
}

std::string_view to_string(StopCode code) {
  switch (code) {
    case StopCode::ConvergedFeasible:
      return "ConvergedFeasible";
    case StopCode::LackOfProgress:
      return "LackOfProgress";
    case StopCode::IterationCap:
      return "IterationCap";
  }
  return "?";
}

char stop_letter(StopCode code) {
  switch (code) {
    case StopCode::ConvergedFeasible:
      return 'C';
    case StopCode::LackOfProgress:
      return 'L';
    case StopCode::IterationCap:
      return 'I';
  }
  return '?';
}

SolveReport acondg1(const ConvexBody& a, const ConvexBody& b, const Vector& x0,
                    const ForcingSchedule& schedule, const StoppingConfig& stop,
                    const CondGLimits& limits) {
  stop.validate();
  limits.validate();
  require_same_space(a, b);
  require_compact(a, "A");
  require_start(a, x0, "x0", "A");
  if (!satisfies_regime(schedule.current(), Regime::OneSet)) {
    throw InvalidInput("acondg1: forcing parameters violate the one-set conditions");
  }
  return run_alternating(a, b, x0, exact_project(b, x0), false, exact_step(b),
                         condg_step(a, limits), schedule, stop);
}

SolveReport acondg2(const ConvexBody& a, const ConvexBody& b, const Vector& x0, const Vector& y0,
                    const ForcingSchedule& schedule, const StoppingConfig& stop,
                    const CondGLimits& limits) {
  stop.validate();
  limits.validate();
  require_same_space(a, b);
  require_compact(a, "A");
  require_compact(b, "B");
  require_start(a, x0, "x0", "A");
  require_start(b, y0, "y0", "B");
  if (!satisfies_regime(schedule.current(), Regime::TwoSets)) {
    throw InvalidInput("acondg2: forcing parameters violate the two-set conditions");
  }
  return run_alternating(a, b, x0, y0, true, condg_step(b, limits), condg_step(a, limits),
                         schedule, stop);
}

SolveReport exact_alternating(const ConvexBody& a, const ConvexBody& b, const Vector& x0,
                              const StoppingConfig& stop, const std::optional<Vector>& y0) {
  stop.validate();
  require_same_space(a, b);
  if (!a.has_exact_projection() || !b.has_exact_projection()) {
    throw UnsupportedOperation("exact_alternating needs exact projections onto both sets");
  }
  require_start(a, x0, "x0", "A");
  if (y0) require_start(b, *y0, "y0", "B");
  const Vector y_start = y0 ? *y0 : exact_project(b, x0);
  // The exact scheme ignores forcing parameters; a zero schedule keeps the trace uniform.
  const ForcingSchedule zero({0.0, 0.0, 0.0}, 0.5, 0.5, Regime::TwoSets);
  return run_alternating(a, b, x0, y_start, y0.has_value(), exact_step(b), exact_step(a), zero,
                         stop);
}

SolveReport averaged_projection(const ConvexBody& a, const ConvexBody& b, const Vector& x0,
                                const Vector& y0, const ForcingSchedule& initial,
                                const StoppingConfig& stop, const CondGLimits& limits) {
  stop.validate();
  limits.validate();
  require_same_space(a, b);
  require_compact(a, "A");
  require_compact(b, "B");
  require_start(a, x0, "x0", "A");
  require_start(b, y0, "y0", "B");
  if (!satisfies_regime(initial.current(), Regime::TwoSets)) {
    throw InvalidInput("averaged_projection: forcing parameters violate the two-set conditions");
  }

  ForcingSchedule schedule = initial;
  SolveReport report;
  Vector x = x0;
  Vector y = y0;
  Vector z = 0.5 * (x0 + y0);
  double z_in_a = violation(a, z);
  double z_in_b = violation(b, z);
  push_row(report, x, y, {violation(b, x), violation(a, y)}, schedule.current(), 0);

  auto done = [&](StopCode code) {
    report.stop_code = code;
    report.outer_iters = static_cast<int>(report.x_trace.size()) - 1;
    report.final_violation = std::max(z_in_a, z_in_b);
    return report;
  };

  int lack_streak = 0;
  for (int k = 0;; ++k) {
    if (z_in_a <= stop.eps_feas && z_in_b <= stop.eps_feas) return done(StopCode::ConvergedFeasible);
    if (lack_streak >= stop.lack_streak) return done(StopCode::LackOfProgress);
    if (k >= stop.max_outer_iters) return done(StopCode::IterationCap);

    const ForcingParams params = schedule.current();
    CondGResult to_a = condg_project(a, params, x, z, limits);
    CondGResult to_b = condg_project(b, params, y, z, limits);
    report.inner_cap_hits += (to_a.stop_reason == CondGStop::IterationCap ? 1 : 0) +
                             (to_b.stop_reason == CondGStop::IterationCap ? 1 : 0);

    x = std::move(to_a.w_plus);
    y = std::move(to_b.w_plus);
    Vector z_next = 0.5 * (x + y);
    lack_streak = max_abs_diff(z_next, z) <= stop.eps_lack ? lack_streak + 1 : 0;
    z = std::move(z_next);

    const double next_in_a = violation(a, z);
    const double next_in_b = violation(b, z);
    schedule = schedule_update(schedule, z_in_b, next_in_b, z_in_a, next_in_a);
    z_in_a = next_in_a;
    z_in_b = next_in_b;
    push_row(report, x, y, {violation(b, x), violation(a, y)}, schedule.current(),
             to_a.inner_iters + to_b.inner_iters);
  }
}

std::vector<Vector> midpoints(const SolveReport& report) {
  std::vector<Vector> z;
  z.reserve(report.x_trace.size());
  for (std::size_t k = 0; k < report.x_trace.size(); ++k) {
    z.push_back(0.5 * (report.x_trace[k] + report.y_trace[k]));
  }
  return z;
}

}  // namespace feasib
