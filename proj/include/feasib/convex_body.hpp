#pragma once

#include <string_view>
#include <variant>

#include "feasib/types.hpp"

namespace feasib {

/// Violation at or below this counts as membership inside the library.
inline constexpr double kMembershipTol = 1e-12;

/// { z : (z - center)^T Q (z - center) - 1 <= 0 } with Q symmetric positive definite.
///
/// The eigendecomposition of Q is computed once at construction; the exact
/// projection solves its scalar multiplier equation in that basis.
class Ellipsoid {
 public:
  Ellipsoid(Vector center, Matrix shape);

  const Vector& center() const { return center_; }
  const Matrix& shape() const { return shape_; }
  const Matrix& shape_inverse() const { return shape_inverse_; }
  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }

  /// (z - center)^T Q (z - center) - 1.
  double constraint(const Vector& z) const;

 private:
  Vector center_;
  Matrix shape_;
  Matrix shape_inverse_;
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

/// 2x2 shape R(angle)^T diag(1/a^2, 1/b^2) R(angle), with R(t) = [cos t, sin t; -sin t, cos t].
Matrix rotated_ellipse_shape(double semi_axis_a, double semi_axis_b, double angle);

/// { z : <normal, z> <= offset }.
class Halfspace {
 public:
  Halfspace(Vector normal, double offset);

  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }

 private:
  Vector normal_;
  double offset_;
};

/// Euclidean ball. Its constraint is written ||z - c||^2 / r^2 - 1 <= 0 so that a
/// ball and the ellipsoid with Q = I / r^2 report identical violations.
class Ball {
 public:
  Ball(Vector center, double radius);

  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vector center_;
  double radius_;
};

/// Axis-aligned box lower <= z <= upper.
class Box {
 public:
  Box(Vector lower, Vector upper);

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  Vector lower_;
  Vector upper_;
};

/// Closed convex set. Immutable after construction, so safe to share between threads.
class ConvexBody {
 public:
  using Variant = std::variant<Ellipsoid, Halfspace, Ball, Box>;

  ConvexBody(Ellipsoid e) : shape_(std::move(e)) {}
  ConvexBody(Halfspace h) : shape_(std::move(h)) {}
  ConvexBody(Ball b) : shape_(std::move(b)) {}
  ConvexBody(Box b) : shape_(std::move(b)) {}

  const Variant& variant() const { return shape_; }
  Eigen::Index dimension() const;

  /// True for ellipsoids, balls and boxes; false for halfspaces.
  bool is_compact() const { return !std::holds_alternative<Halfspace>(shape_); }
  /// Every shipped body has a closed-form (or scalar-solve) projection.
  bool has_exact_projection() const { return true; }

  std::string_view kind_name() const;

 private:
  Variant shape_;
};

/// Max over the body's inequality constraints of max{0, g_i(z)}; zero iff z is a member.
double violation(const ConvexBody& body, const Vector& z);

bool is_member(const ConvexBody& body, const Vector& z, double tol = kMembershipTol);

struct LinearMinimizer {
  Vector point;
  double value = 0.0;
};

/// argmin over the body of <c, z>. Ties (zero components of c on a box, or c = 0) resolve
/// to the lower corner / center. Throws UnsupportedOperation for non-compact bodies.
LinearMinimizer lo_minimize(const ConvexBody& body, const Vector& c);

/// max over the body of <c, z>, from each body's closed form.
double support(const ConvexBody& body, const Vector& c);

/// Euclidean projection onto the body.
Vector exact_project(const ConvexBody& body, const Vector& v);

/// max ||z - w|| over pairs of members. Compact bodies only.
double diameter(const ConvexBody& body);

/// A canonical member: the center for round bodies, the midpoint for boxes and the
/// foot of the normal through the origin for halfspaces.
Vector reference_point(const ConvexBody& body);

}  // namespace feasib
