#include "feasib/condg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace feasib {

namespace {
constexpr double kAnchorMembershipTol = 1e-10;
// Below this squared step length the closed-form step size divides by ~0.
constexpr double kDegenerateStepSq = 1e-24;
}  // namespace

void ForcingParams::validate() const {
  for (double p : {gamma, theta, lambda}) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidInput(fmt::format("forcing parameters must be finite and nonnegative "
                                     "(gamma={}, theta={}, lambda={})",
                                     gamma, theta, lambda));
    }
  }
}

void CondGLimits::validate() const {
  if (max_inner_iters < 1) throw InvalidInput("max_inner_iters must be at least 1");
  if (!(degenerate_gap_tol >= 0.0)) throw InvalidInput("degenerate_gap_tol must be nonnegative");
}

std::string_view to_string(CondGStop stop) {
  switch (stop) {
    case CondGStop::ToleranceMet:
      return "ToleranceMet";
    case CondGStop::DegenerateGap:
      return "DegenerateGap";
    case CondGStop::IterationCap:
      return "IterationCap";
  }
  return "?";
}

double phi(const ForcingParams& params, const Vector& u, const Vector& v, const Vector& w) {
  require_same_dimension(u, v, "phi");
  require_same_dimension(u, w, "phi");
  return params.gamma * (v - u).squaredNorm() + params.theta * (w - v).squaredNorm() +
         params.lambda * (w - u).squaredNorm();
}

CondGResult condg_project(const ConvexBody& body, const ForcingParams& params, const Vector& u,
                          const Vector& v, const CondGLimits& limits,
                          const CondGObserver& observer) {
  if (!body.is_compact()) {
    throw UnsupportedOperation(
        fmt::format("conditional gradient needs a compact body (got {})", body.kind_name()));
  }
  params.validate();
  limits.validate();
  require_same_dimension(u, v, "condg_project");
  require_finite(v, "condg_project target");
  if (violation(body, u) > kAnchorMembershipTol) {
    throw InvalidInput("condg_project: anchor u is not a member of the body");
  }

  CondGResult result;
  Vector w = u;
  for (int iter = 0;; ++iter) {
    if (observer) observer(w);

    const Vector grad = w - v;
    const LinearMinimizer vertex = lo_minimize(body, grad);
    const Vector direction = vertex.point - w;
    const double gap = -grad.dot(direction);

    result.inner_iters = iter;
    result.final_gap = gap;

    if (gap <= phi(params, u, v, w)) {
      result.stop_reason = CondGStop::ToleranceMet;
      break;
    }
    const double step_sq = direction.squaredNorm();
    if (gap <= limits.degenerate_gap_tol || step_sq <= kDegenerateStepSq) {
      result.stop_reason = CondGStop::DegenerateGap;
      break;
    }
    if (iter >= limits.max_inner_iters) {
      result.stop_reason = CondGStop::IterationCap;
      break;
    }
    const double alpha = std::min(1.0, gap / step_sq);
    if (alpha == 1.0) {
      w = vertex.point;
    } else {
      w += alpha * direction;
    }
  }
  result.w_plus = std::move(w);
  return result;
}

}  // namespace feasib
