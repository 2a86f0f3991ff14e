#pragma once

#include <functional>
#include <string_view>

#include "feasib/convex_body.hpp"

namespace feasib {

/// Forcing parameters (gamma, theta, lambda) of the relative error tolerance
///   phi(u, v, w) = gamma ||v - u||^2 + theta ||w - v||^2 + lambda ||w - u||^2.
struct ForcingParams {
  double gamma = 0.0;
  double theta = 0.0;
  double lambda = 0.0;

  /// Throws InvalidInput if any component is negative or non-finite.
  void validate() const;

  friend bool operator==(const ForcingParams&, const ForcingParams&) = default;
};

struct CondGLimits {
  int max_inner_iters = 10000;
  double degenerate_gap_tol = 1e-14;

  void validate() const;
};

enum class CondGStop { ToleranceMet, DegenerateGap, IterationCap };

std::string_view to_string(CondGStop stop);

struct CondGResult {
  Vector w_plus;
  int inner_iters = 0;
  /// Wolfe gap -s* = <v - w, z - w> evaluated at w_plus.
  double final_gap = 0.0;
  CondGStop stop_reason = CondGStop::ToleranceMet;
};

/// Called with every inner iterate w_0 = u, w_1, ..., w_plus (in order).
using CondGObserver = std::function<void(const Vector& w)>;

double phi(const ForcingParams& params, const Vector& u, const Vector& v, const Vector& w);

/// Conditional-gradient (Frank-Wolfe) inexact projection of `v` onto a compact `body`,
/// started at the member `u`. The returned point is a member of the body and, unless the
/// iteration cap fired, satisfies
///   <v - w_plus, z - w_plus> <= phi(u, v, w_plus)   for every member z.
/// With all forcing parameters zero the loop runs to the exact projection (up to
/// `limits.degenerate_gap_tol`).
///
/// Throws UnsupportedOperation for non-compact bodies and InvalidInput when `u` is not a
/// member (violation above 1e-10) or dimensions disagree.
CondGResult condg_project(const ConvexBody& body, const ForcingParams& params, const Vector& u,
                          const Vector& v, const CondGLimits& limits = {},
                          const CondGObserver& observer = {});

}  // namespace feasib
