#include "feasib/oracles.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <fmt/format.h>

namespace feasib::oracles {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Boundary curve z(t) for t in [t_min, t_max] with tangent dz/dt; closed curves wrap around.
struct BoundaryCurve {
  std::function<Vector(double)> point;
  std::function<Vector(double)> tangent;
  double t_min = 0.0;
  double t_max = 0.0;
};

BoundaryCurve boundary_of(const ConvexBody& body, const Vector& v) {
  return std::visit(
      Overloaded{
          [](const Ellipsoid& e) {
            // (z - c)^T L L^T (z - c) = 1  <=>  z = c + L^{-T} (cos t, sin t).
            const Eigen::LLT<Matrix> llt(e.shape());
            const Matrix lt_inv = Matrix(llt.matrixU()).inverse();
            const Vector c = e.center();
            return BoundaryCurve{[lt_inv, c](double t) -> Vector {
                                   Vector u(2);
                                   u << std::cos(t), std::sin(t);
                                   return c + lt_inv * u;
                                 },
                                 [lt_inv](double t) -> Vector {
                                   Vector du(2);
                                   du << -std::sin(t), std::cos(t);
                                   return lt_inv * du;
                                 },
                                 0.0, 2.0 * std::numbers::pi};
          },
          [](const Ball& b) {
            const Vector c = b.center();
            const double r = b.radius();
            return BoundaryCurve{[c, r](double t) -> Vector {
                                   Vector u(2);
                                   u << std::cos(t), std::sin(t);
                                   return c + r * u;
                                 },
                                 [r](double t) -> Vector {
                                   Vector du(2);
                                   du << -std::sin(t), std::cos(t);
                                   return r * du;
                                 },
                                 0.0, 2.0 * std::numbers::pi};
          },
          [](const Box& b) {
            const Vector lo = b.lower();
            const Vector hi = b.upper();
            // Perimeter walk: bottom, right, top, left edges for t in [0,1), [1,2), ...
            return BoundaryCurve{[lo, hi](double t) -> Vector {
                                   t = std::fmod(t, 4.0);
                                   if (t < 0.0) t += 4.0;
                                   const int edge = std::min(3, static_cast<int>(t));
                                   const double s = t - edge;
                                   Vector z(2);
                                   switch (edge) {
                                     case 0:
                                       z << lo[0] + s * (hi[0] - lo[0]), lo[1];
                                       break;
                                     case 1:
                                       z << hi[0], lo[1] + s * (hi[1] - lo[1]);
                                       break;
                                     case 2:
                                       z << hi[0] - s * (hi[0] - lo[0]), hi[1];
                                       break;
                                     default:
                                       z << lo[0], hi[1] - s * (hi[1] - lo[1]);
                                       break;
                                   }
                                   return z;
                                 },
                                 [lo, hi](double t) -> Vector {
                                   t = std::fmod(t, 4.0);
                                   if (t < 0.0) t += 4.0;
                                   const Vector w = hi - lo;
                                   Vector dz(2);
                                   switch (std::min(3, static_cast<int>(t))) {
                                     case 0:
                                       dz << w[0], 0.0;
                                       break;
                                     case 1:
                                       dz << 0.0, w[1];
                                       break;
                                     case 2:
                                       dz << -w[0], 0.0;
                                       break;
                                     default:
                                       dz << 0.0, -w[1];
                                       break;
                                   }
                                   return dz;
                                 },
                                 0.0, 4.0};
          },
          [&v](const Halfspace& h) {
            const Vector a = h.normal();
            const Vector base = (h.offset() / a.squaredNorm()) * a;
            Vector tangent(2);
            tangent << -a[1], a[0];
            tangent.normalize();
            // The nearest boundary point is no farther from `base` than v is.
            const double reach = (v - base).norm() + 1.0;
            return BoundaryCurve{
                [base, tangent](double t) -> Vector { return base + t * tangent; },
                [tangent](double) -> Vector { return tangent; }, -reach, reach};
          }},
      body.variant());
}

}  // namespace

void OracleConfig::validate(Eigen::Index dimension) const {
  if (boundary_samples < 1 || (dimension == 2 && boundary_samples < 1000)) {
    throw InvalidInput("oracle boundary_samples must be at least 1000 for 2D bodies");
  }
  if (refine_iters < 1) throw InvalidInput("oracle refine_iters must be positive");
  if (!(tolerance > 0.0)) throw InvalidInput("oracle tolerance must be positive");
}

Vector brute_project(const ConvexBody& body, const Vector& v, const OracleConfig& cfg) {
  if (body.dimension() != 2) {
    throw UnsupportedOperation(
        fmt::format("brute_project is 2D only (got dimension {})", body.dimension()));
  }
  cfg.validate(2);
  if (v.size() != 2) throw InvalidInput("brute_project: point must be 2D");
  if (violation(body, v) <= kMembershipTol) return v;

  const BoundaryCurve curve = boundary_of(body, v);
  auto dist2 = [&](double t) { return (curve.point(t) - v).squaredNorm(); };

  const int n = cfg.boundary_samples;
  const double span = curve.t_max - curve.t_min;
  const double h = span / n;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double d = dist2(curve.t_min + i * h);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }

  // The distance from an exterior point along a convex boundary is unimodal, so the slope
  // of dist2 changes sign once on [t_best - h, t_best + h]. Bisect on that sign: comparing
  // distances directly stalls near sqrt(machine epsilon).
  const double t_best = curve.t_min + best * h;
  double lo = t_best - h;
  double hi = t_best + h;
  if (std::holds_alternative<Halfspace>(body.variant())) {
    lo = std::max(lo, curve.t_min);
    hi = std::min(hi, curve.t_max);
  }
  auto descending = [&](double t) { return (curve.point(t) - v).dot(curve.tangent(t)) < 0.0; };
  for (int i = 0; i < cfg.refine_iters && hi - lo > cfg.tolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (descending(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return curve.point(0.5 * (lo + hi));
}

double dist_ellipse_halfspace(const Ellipsoid& ellipse, const Halfspace& halfspace) {
  const Vector& a = halfspace.normal();
  if (a.size() != ellipse.center().size()) {
    throw InvalidInput("dist_ellipse_halfspace: dimension mismatch");
  }
  const double norm_a = a.norm();
  const Matrix q_inv = ellipse.shape().inverse();
  const double reach = std::sqrt(a.dot(q_inv * a));
  const double gap = (a.dot(ellipse.center()) - halfspace.offset() - reach) / norm_a;
  return std::max(0.0, gap);
}

BodyDistance dist_two_bodies(const ConvexBody& a, const ConvexBody& b, const OracleConfig& cfg) {
  if (a.dimension() != b.dimension()) throw InvalidInput("dist_two_bodies: dimension mismatch");
  if (!a.has_exact_projection() || !b.has_exact_projection()) {
    throw UnsupportedOperation("dist_two_bodies needs exact projections");
  }
  if (!(cfg.tolerance > 0.0) || cfg.refine_iters < 1) {
    throw InvalidInput("dist_two_bodies: invalid oracle configuration");
  }

  const Eigen::Index n = a.dimension();
  std::vector<Vector> starts = {reference_point(a), reference_point(b)};
  for (const Vector& ref : {reference_point(a), reference_point(b)}) {
    for (Eigen::Index i = 0; i < n; ++i) {
      starts.push_back(ref + Vector::Unit(n, i));
      starts.push_back(ref - Vector::Unit(n, i));
    }
  }

  const long max_sweeps = static_cast<long>(cfg.refine_iters) * 1000;
  BodyDistance best;
  best.distance = std::numeric_limits<double>::infinity();
  for (const Vector& s : starts) {
    Vector x = exact_project(a, s);
    Vector y = exact_project(b, x);
    for (long k = 0; k < max_sweeps; ++k) {
      const Vector x_next = exact_project(a, y);
      const Vector y_next = exact_project(b, x_next);
      const double moved = std::max(max_abs_diff(x_next, x), max_abs_diff(y_next, y));
      x = x_next;
      y = y_next;
      if (moved <= cfg.tolerance) break;
    }
    const double d = (x - y).norm();
    if (d < best.distance) best = {d, x, y};
  }
  return best;
}

}  // namespace feasib::oracles
