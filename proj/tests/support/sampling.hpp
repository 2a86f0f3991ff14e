#pragma once

#include <random>
#include <vector>

#include "feasib/convex_body.hpp"
#include "feasib/solvers.hpp"

namespace feasib::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
Vector gaussian_vector(Rng& rng, Eigen::Index dim);
Vector unit_vector(Rng& rng, Eigen::Index dim);

/// Random SPD shape with semi-axes in [min_axis, max_axis] and a random orientation.
Ellipsoid random_ellipsoid(Rng& rng, Eigen::Index dim, double min_axis = 0.2, double max_axis = 2.0);
Ball random_ball(Rng& rng, Eigen::Index dim);
Box random_box(Rng& rng, Eigen::Index dim);
Halfspace random_halfspace(Rng& rng, Eigen::Index dim);
/// Ellipsoid, ball or box, chosen uniformly.
ConvexBody random_compact_body(Rng& rng, Eigen::Index dim);

/// Member drawn without calling projection code: ellipsoids and balls map the unit ball
/// through their own square-root factor, boxes sample each coordinate, halfspaces step
/// inward from the boundary along the normal.
Vector sample_member(const ConvexBody& body, Rng& rng);
std::vector<Vector> sample_members(const ConvexBody& body, Rng& rng, int count);

/// Point outside the body at distance roughly in [0.1, 3] times its size.
Vector sample_exterior(const ConvexBody& body, Rng& rng);

/// Same body moved by `shift`.
ConvexBody translated(const ConvexBody& body, const Vector& shift);

/// Random compact body moved so that one of its sampled members lands on `point`.
ConvexBody random_compact_body_containing(Rng& rng, const Vector& point);

/// Halfspace {n.z <= b} whose boundary lies `gap` outside `body` along the unit normal n.
Halfspace halfspace_at_distance(const ConvexBody& body, const Vector& unit_normal, double gap);

/// Standard defaults scaled by delta on every iteration with nonzero violations (tau is
/// tiny), so the forcing terms decay geometrically and are summable.
ForcingSchedule summable_schedule(Regime regime);

/// Stopping rule for limit checks: the streak outlasts short CondG stalls at the warm start.
StoppingConfig limit_stopping();

/// Benchmark 2D ellipse: center 0, angle -pi/4, semi-axes 2 and 1/5.
Ellipsoid experiment_ellipse();

}  // namespace feasib::testing
