#pragma once

#include "feasib/convex_body.hpp"

// Slow, independent ground-truth routines for tests and the experiment harness.
// Solvers never call into this header.

namespace feasib::oracles {

struct OracleConfig {
  int boundary_samples = 100000;
  int refine_iters = 200;
  double tolerance = 1e-12;

  void validate(Eigen::Index dimension) const;
};

/// Nearest point of a 2D body by dense boundary sampling plus golden-section refinement of
/// the boundary parameter. Members are returned unchanged. Dimensions other than 2 throw
/// UnsupportedOperation.
Vector brute_project(const ConvexBody& body, const Vector& v, const OracleConfig& cfg = {});

/// Distance between an ellipsoid and a halfspace from the ellipsoid's support function:
///   max{0, (<a, c> - b) / ||a|| - sqrt(a^T Q^{-1} a) / ||a||}.
double dist_ellipse_halfspace(const Ellipsoid& ellipse, const Halfspace& halfspace);

struct BodyDistance {
  double distance = 0.0;
  Vector point_a;
  Vector point_b;
};

/// Distance between two bodies by exact alternating projections from several deterministic
/// starts, each run until consecutive iterates move less than cfg.tolerance (infinity norm)
/// or cfg.refine_iters * 1000 sweeps. Returns the closest pair found.
BodyDistance dist_two_bodies(const ConvexBody& a, const ConvexBody& b, const OracleConfig& cfg = {});

}  // namespace feasib::oracles
