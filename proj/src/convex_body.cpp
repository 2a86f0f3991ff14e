#include "feasib/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace feasib {

void require_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) {
    throw InvalidInput(fmt::format("{}: entries must be finite", what));
  }
}

void require_same_dimension(const Vector& a, const Vector& b, const std::string& what) {
  if (a.size() != b.size()) {
    throw InvalidInput(fmt::format("{}: dimension mismatch ({} vs {})", what, a.size(), b.size()));
  }
}

double max_abs_diff(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Ellipsoid

Ellipsoid::Ellipsoid(Vector center, Matrix shape) : center_(std::move(center)) {
  require_finite(center_, "ellipsoid center");
  const Eigen::Index n = center_.size();
  if (n == 0) throw InvalidInput("ellipsoid: dimension must be positive");
  if (shape.rows() != n || shape.cols() != n) {
    throw InvalidInput(fmt::format("ellipsoid: shape must be {}x{}", n, n));
  }
  if (!shape.allFinite()) throw InvalidInput("ellipsoid shape: entries must be finite");

  const double scale = std::max(1.0, shape.cwiseAbs().maxCoeff());
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput("ellipsoid: shape must be symmetric");
  }
  shape_ = 0.5 * (shape + shape.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(shape_);
  if (eig.info() != Eigen::Success) throw InvalidInput("ellipsoid: eigendecomposition failed");
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
  if (eigenvalues_.minCoeff() <= 0.0) {
    throw InvalidInput("ellipsoid: shape must be positive definite");
  }
  shape_inverse_ =
      eigenvectors_ * eigenvalues_.cwiseInverse().asDiagonal() * eigenvectors_.transpose();
}

double Ellipsoid::constraint(const Vector& z) const {
  const Vector d = z - center_;
  return d.dot(shape_ * d) - 1.0;
}

Matrix rotated_ellipse_shape(double semi_axis_a, double semi_axis_b, double angle) {
  if (!(semi_axis_a > 0.0) || !(semi_axis_b > 0.0)) {
    throw InvalidInput("ellipse semi-axes must be positive");
  }
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0 / (semi_axis_a * semi_axis_a);
  d(1, 1) = 1.0 / (semi_axis_b * semi_axis_b);
  Matrix r(2, 2);
  r << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
  Matrix q = r.transpose() * d * r;
  return 0.5 * (q + q.transpose());
}

// ---------------------------------------------------------------------------
// Halfspace, Ball, Box

Halfspace::Halfspace(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  require_finite(normal_, "halfspace normal");
  if (normal_.size() == 0) throw InvalidInput("halfspace: dimension must be positive");
  if (!std::isfinite(offset_)) throw InvalidInput("halfspace offset must be finite");
  if (normal_.squaredNorm() == 0.0) throw InvalidInput("halfspace normal must be nonzero");
}

Ball::Ball(Vector center, double radius) : center_(std::move(center)), radius_(radius) {
  require_finite(center_, "ball center");
  if (center_.size() == 0) throw InvalidInput("ball: dimension must be positive");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw InvalidInput("ball radius must be positive and finite");
  }
}

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  require_finite(lower_, "box lower");
  require_finite(upper_, "box upper");
  require_same_dimension(lower_, upper_, "box bounds");
  if (lower_.size() == 0) throw InvalidInput("box: dimension must be positive");
  if ((upper_ - lower_).minCoeff() < 0.0) {
    throw InvalidInput("box: lower must not exceed upper");
  }
}

// ---------------------------------------------------------------------------
// ConvexBody

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_argument(const ConvexBody& body, const Vector& v, const char* what) {
  if (v.size() != body.dimension()) {
    throw InvalidInput(fmt::format("{}: dimension {} does not match {} of dimension {}", what,
                                   v.size(), body.kind_name(), body.dimension()));
  }
  require_finite(v, what);
}

// Projection onto { (z - c)^T Q (z - c) <= 1 } for v outside. With Q = U diag(q) U^T and
// r = U^T (v - c), the minimizer is z(mu) = c + U diag(1 / (1 + mu q)) r where mu > 0 solves
//   f(mu) = sum_i q_i r_i^2 / (1 + mu q_i)^2 - 1 = 0.
// f is convex and strictly decreasing on [0, inf), so a Newton step from the left of the root
// never overshoots; bisection on the bracket takes over whenever Newton stalls.
Vector project_onto_ellipsoid(const Ellipsoid& e, const Vector& v) {
  const Vector offset = v - e.center();
  if (offset.dot(e.shape() * offset) <= 1.0) return v;

  const Vector& q = e.eigenvalues();
  const Vector r = e.eigenvectors().transpose() * offset;
  const Vector qr2 = q.cwiseProduct(r.cwiseProduct(r));

  auto residual = [&](double mu, double* slope) {
    const Vector denom = (q * mu).array() + 1.0;
    const Vector inv2 = denom.array().square().inverse();
    if (slope != nullptr) {
      *slope = -2.0 * (qr2.cwiseProduct(q).array() * inv2.array() / denom.array()).sum();
    }
    return qr2.dot(inv2) - 1.0;
  };

  constexpr double kResidualTol = 1e-12;
  constexpr int kMaxIters = 200;

  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < kMaxIters && residual(hi, nullptr) > 0.0; ++i) {
    lo = hi;
    hi *= 2.0;
  }

  double mu = lo;
  for (int i = 0; i < kMaxIters; ++i) {
    double slope = 0.0;
    const double f = residual(mu, &slope);
    if (std::abs(f) <= kResidualTol) break;
    if (f > 0.0) {
      lo = mu;
    } else {
      hi = mu;
    }
    double next = mu - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == mu) break;
    mu = next;
  }
  // Prefer the feasible side of the root when the last step ended just outside.
  if (residual(mu, nullptr) > kResidualTol) mu = hi;

  const Vector scaled = r.array() / ((q * mu).array() + 1.0);
  return e.center() + e.eigenvectors() * scaled;
}

}  // namespace

Eigen::Index ConvexBody::dimension() const {
  return std::visit(
      Overloaded{[](const Ellipsoid& e) { return e.center().size(); },
                 [](const Halfspace& h) { return h.normal().size(); },
                 [](const Ball& b) { return b.center().size(); },
                 [](const Box& b) { return b.lower().size(); }},
      shape_);
}

std::string_view ConvexBody::kind_name() const {
  return std::visit(Overloaded{[](const Ellipsoid&) { return std::string_view("ellipsoid"); },
                               [](const Halfspace&) { return std::string_view("halfspace"); },
                               [](const Ball&) { return std::string_view("ball"); },
                               [](const Box&) { return std::string_view("box"); }},
                    shape_);
}

double violation(const ConvexBody& body, const Vector& z) {
  check_argument(body, z, "violation point");
  return std::visit(
      Overloaded{
          [&](const Ellipsoid& e) { return std::max(0.0, e.constraint(z)); },
          [&](const Halfspace& h) { return std::max(0.0, h.normal().dot(z) - h.offset()); },
          [&](const Ball& b) {
            return std::max(0.0, (z - b.center()).squaredNorm() / (b.radius() * b.radius()) - 1.0);
          },
          [&](const Box& b) {
            const double below = (b.lower() - z).maxCoeff();
            const double above = (z - b.upper()).maxCoeff();
            return std::max({0.0, below, above});
          }},
      body.variant());
}

bool is_member(const ConvexBody& body, const Vector& z, double tol) {
  return violation(body, z) <= tol;
}

LinearMinimizer lo_minimize(const ConvexBody& body, const Vector& c) {
  check_argument(body, c, "linear objective");
  return std::visit(
      Overloaded{
          [&](const Ellipsoid& e) {
            const Vector qc = e.shape_inverse() * c;
            const double norm = std::sqrt(std::max(0.0, c.dot(qc)));
            if (norm == 0.0) return LinearMinimizer{e.center(), c.dot(e.center())};
            Vector z = e.center() - qc / norm;
            const double value = c.dot(z);
            return LinearMinimizer{std::move(z), value};
          },
          [&](const Halfspace&) -> LinearMinimizer {
            throw UnsupportedOperation("linear oracle requires a compact body (got halfspace)");
          },
          [&](const Ball& b) {
            const double norm = c.norm();
            if (norm == 0.0) return LinearMinimizer{b.center(), 0.0};
            Vector z = b.center() - (b.radius() / norm) * c;
            const double value = c.dot(z);
            return LinearMinimizer{std::move(z), value};
          },
          [&](const Box& b) {
            Vector z = b.lower();
            for (Eigen::Index i = 0; i < z.size(); ++i) {
              if (c[i] < 0.0) z[i] = b.upper()[i];
            }
            const double value = c.dot(z);
            return LinearMinimizer{std::move(z), value};
          }},
      body.variant());
}

double support(const ConvexBody& body, const Vector& c) {
  check_argument(body, c, "support direction");
  return std::visit(
      Overloaded{
          [&](const Ellipsoid& e) {
            return c.dot(e.center()) + std::sqrt(std::max(0.0, c.dot(e.shape_inverse() * c)));
          },
          [&](const Halfspace&) -> double {
            throw UnsupportedOperation("support function requires a compact body (got halfspace)");
          },
          [&](const Ball& b) { return c.dot(b.center()) + b.radius() * c.norm(); },
          [&](const Box& b) {
            return c.cwiseProduct(b.lower()).cwiseMax(c.cwiseProduct(b.upper())).sum();
          }},
      body.variant());
}

Vector exact_project(const ConvexBody& body, const Vector& v) {
  check_argument(body, v, "projection point");
  return std::visit(
      Overloaded{[&](const Ellipsoid& e) { return project_onto_ellipsoid(e, v); },
                 [&](const Halfspace& h) -> Vector {
                   const double excess = h.normal().dot(v) - h.offset();
                   if (excess <= 0.0) return v;
                   return v - (excess / h.normal().squaredNorm()) * h.normal();
                 },
                 [&](const Ball& b) -> Vector {
                   const Vector d = v - b.center();
                   const double dist = d.norm();
                   if (dist <= b.radius()) return v;
                   return b.center() + (b.radius() / dist) * d;
                 },
                 [&](const Box& b) -> Vector { return v.cwiseMax(b.lower()).cwiseMin(b.upper()); }},
      body.variant());
}

double diameter(const ConvexBody& body) {
  return std::visit(
      Overloaded{[](const Ellipsoid& e) { return 2.0 / std::sqrt(e.eigenvalues().minCoeff()); },
                 [](const Halfspace&) -> double {
                   throw UnsupportedOperation("halfspaces are unbounded");
                 },
                 [](const Ball& b) { return 2.0 * b.radius(); },
                 [](const Box& b) { return (b.upper() - b.lower()).norm(); }},
      body.variant());
}

Vector reference_point(const ConvexBody& body) {
  return std::visit(
      Overloaded{[](const Ellipsoid& e) -> Vector { return e.center(); },
                 [](const Halfspace& h) -> Vector {
                   return (h.offset() / h.normal().squaredNorm()) * h.normal();
                 },
                 [](const Ball& b) -> Vector { return b.center(); },
                 [](const Box& b) -> Vector { return 0.5 * (b.lower() + b.upper()); }},
      body.variant());
}

}  // namespace feasib
