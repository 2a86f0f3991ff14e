#include <doctest.h>

#include <cmath>
#include <numbers>

#include "feasib/oracles.hpp"
#include "feasib/solvers.hpp"
#include "support/sampling.hpp"

using namespace feasib;
using feasib::testing::Rng;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Ellipsoid unit_disk() { return Ellipsoid(Vector::Zero(2), Matrix::Identity(2, 2)); }

// B = {z : -z_1 + beta <= 0}.
Halfspace table1_b(double beta) { return Halfspace(vec({-1, 0}), -beta); }

Ellipsoid table2_b(double shift) {
  return Ellipsoid(vec({shift, 0.5}), rotated_ellipse_shape(2.0, 0.4, std::numbers::pi / 3.0));
}

void check_trace_feasible(const SolveReport& r, const ConvexBody& a, const ConvexBody& b) {
  REQUIRE(r.x_trace.size() == r.y_trace.size());
  REQUIRE(r.x_trace.size() == r.violations.size());
  REQUIRE(r.x_trace.size() == r.schedule_trace.size());
  REQUIRE(static_cast<int>(r.x_trace.size()) == r.outer_iters + 1);
  for (std::size_t k = 0; k < r.x_trace.size(); ++k) {
    CHECK(violation(a, r.x_trace[k]) <= 1e-10);
    CHECK(violation(b, r.y_trace[k]) <= 1e-10);
    CHECK(r.violations[k].c_b_x >= 0.0);
    CHECK(r.violations[k].c_a_y >= 0.0);
  }
}

// Feasible instance with a known common point.
struct Instance {
  ConvexBody a;
  ConvexBody b;
  Vector x0;
  Vector y0;
  std::vector<Vector> common;
};

Instance feasible_instance(Rng& rng, Eigen::Index dim, bool compact_b) {
  const ConvexBody a = testing::random_compact_body(rng, dim);
  const Vector x_bar = testing::sample_member(a, rng);
  const Vector n = testing::unit_vector(rng, dim);
  const ConvexBody b = compact_b ? testing::random_compact_body_containing(rng, x_bar)
                                 : ConvexBody(Halfspace(n, n.dot(x_bar) + testing::uniform(rng, 0.0, 0.3)));
  std::vector<Vector> common{x_bar};
  for (const Vector& z : testing::sample_members(a, rng, 200)) {
    if (violation(b, z) == 0.0 && common.size() < 10) common.push_back(z);
  }
  return {a, b, testing::sample_member(a, rng), testing::sample_member(b, rng), common};
}

}  // namespace

TEST_SUITE("solvers") {
  TEST_CASE("acondg1 finds a strictly feasible point for beta = 1.30") {
    const SolveReport r = acondg1(testing::experiment_ellipse(), table1_b(1.30), vec({0, 0}),
                                  ForcingSchedule::standard(Regime::OneSet));
    CHECK(r.stop_code == StopCode::ConvergedFeasible);
    CHECK(r.final_violation == 0.0);
    CHECK(r.outer_iters <= 50);
    check_trace_feasible(r, testing::experiment_ellipse(), table1_b(1.30));
  }

  TEST_CASE("acondg1 on the infeasible beta = 1.50 instance") {
    const SolveReport r = acondg1(testing::experiment_ellipse(), table1_b(1.50), vec({0, 0}),
                                  ForcingSchedule::standard(Regime::OneSet));
    CHECK(r.stop_code == StopCode::LackOfProgress);
    CHECK(std::abs(r.final_violation - (1.5 - std::sqrt(2.02))) <= 1e-4);
    const double d = oracles::dist_ellipse_halfspace(testing::experiment_ellipse(), table1_b(1.50));
    CHECK(std::abs(r.final_violation - d) <= 1e-4);
  }

  TEST_CASE("start already in both sets") {
    const SolveReport one = acondg1(unit_disk(), Halfspace(vec({-1, 0}), 0), vec({0.5, 0}),
                                    ForcingSchedule::standard(Regime::OneSet));
    CHECK(one.stop_code == StopCode::ConvergedFeasible);
    CHECK(one.outer_iters == 0);
    CHECK(one.x_trace.size() == 1);

    const SolveReport two = acondg2(unit_disk(), unit_disk(), vec({0, 0}), vec({0, 0}),
                                    ForcingSchedule::standard(Regime::TwoSets));
    CHECK(two.stop_code == StopCode::ConvergedFeasible);
    CHECK(two.outer_iters == 0);

    const SolveReport exact = exact_alternating(unit_disk(), unit_disk(), vec({0.3, -0.2}));
    CHECK(exact.stop_code == StopCode::ConvergedFeasible);
    CHECK(exact.outer_iters == 0);
  }

  TEST_CASE("acondg2 on the Table 2 sets") {
    const Ellipsoid a = testing::experiment_ellipse();
    const SolveReport feasible =
        acondg2(a, table2_b(2.30), vec({0, 0}), vec({2.30, 0.5}), ForcingSchedule::standard(Regime::TwoSets));
    CHECK(feasible.stop_code == StopCode::ConvergedFeasible);
    CHECK(feasible.final_violation == 0.0);
    CHECK(feasible.outer_iters <= 50);
    check_trace_feasible(feasible, a, table2_b(2.30));

    const SolveReport infeasible =
        acondg2(a, table2_b(2.50), vec({0, 0}), vec({2.50, 0.5}), ForcingSchedule::standard(Regime::TwoSets));
    CHECK(infeasible.stop_code == StopCode::LackOfProgress);
    CHECK(std::abs(infeasible.final_violation - 1.59e-1) <= 2e-2 * 1.59e-1);
    check_trace_feasible(infeasible, a, table2_b(2.50));
  }

  TEST_CASE("averaged projections") {
    const SolveReport trivial = averaged_projection(unit_disk(), unit_disk(), vec({1, 0}), vec({-1, 0}),
                                                    ForcingSchedule::standard(Regime::TwoSets));
    CHECK(trivial.stop_code == StopCode::ConvergedFeasible);
    CHECK(trivial.outer_iters == 0);

    const Ball left(vec({-2, 0}), 1.0);
    const Ball right(vec({2, 0}), 1.0);
    // z^0 = 0 is already the fixed point, so z never moves; the anchors need the longer streak.
    const SolveReport apart = averaged_projection(left, right, vec({-2, 0.5}), vec({2, -0.5}),
                                                  ForcingSchedule::standard(Regime::TwoSets), testing::limit_stopping());
    CHECK(apart.stop_code == StopCode::LackOfProgress);
    CHECK(midpoints(apart).back().norm() <= 1e-3);
    CHECK((apart.x_last() - vec({-1, 0})).norm() <= 1e-3);
    CHECK((apart.y_last() - vec({1, 0})).norm() <= 1e-3);
    check_trace_feasible(apart, left, right);

    const Ellipsoid a = testing::experiment_ellipse();
    const SolveReport baseline =
        averaged_projection(a, table2_b(2.30), vec({0, 0}), vec({2.30, 0.5}), ForcingSchedule::standard(Regime::TwoSets));
    CHECK(baseline.stop_code == StopCode::ConvergedFeasible);
    CHECK(baseline.outer_iters <= 500);
    CHECK(violation(a, midpoints(baseline).back()) <= 1e-8);
    CHECK(violation(table2_b(2.30), midpoints(baseline).back()) <= 1e-8);
  }

  TEST_CASE("exact alternating baseline") {
    const SolveReport feasible = exact_alternating(testing::experiment_ellipse(), table1_b(1.30), vec({0, 0}));
    CHECK(feasible.final_violation > 0.0);
    CHECK(feasible.final_violation <= 1e-6);

    const SolveReport apart = exact_alternating(unit_disk(), Ball(vec({4, 0}), 1.0), vec({-0.5, 0}));
    CHECK(apart.stop_code == StopCode::LackOfProgress);
    CHECK(std::abs((apart.x_last() - apart.y_last()).norm() - 2.0) <= 1e-6);

    const SolveReport apart_y0 = exact_alternating(Ball(vec({-2, 0}), 1.0), Ball(vec({2, 0}), 1.0),
                                                   vec({-1.5, 0}), {}, vec({2, 0}));
    CHECK(apart_y0.stop_code == StopCode::LackOfProgress);
    CHECK(std::abs((apart_y0.x_last() - apart_y0.y_last()).norm() - 2.0) <= 1e-6);

    const SolveReport table1_far = exact_alternating(testing::experiment_ellipse(), table1_b(1.60), vec({0, 0}));
    CHECK(table1_far.stop_code == StopCode::LackOfProgress);
    CHECK(std::abs(table1_far.final_violation - 1.79e-1) <= 1e-3);
  }

  TEST_CASE("input errors") {
    const ForcingSchedule one = ForcingSchedule::standard(Regime::OneSet);
    const ForcingSchedule two = ForcingSchedule::standard(Regime::TwoSets);
    CHECK_THROWS_AS(acondg1(unit_disk(), table1_b(1.5), vec({2, 0}), one), InvalidInput);
    CHECK_THROWS_AS(acondg1(table1_b(1.5), unit_disk(), vec({2, 0}), one), UnsupportedOperation);
    CHECK_THROWS_AS(acondg1(unit_disk(), Ball(vec({0, 0, 0}), 1), vec({0, 0}), one), InvalidInput);
    CHECK_THROWS_AS(acondg2(unit_disk(), table1_b(1.5), vec({0, 0}), vec({2, 0}), two), UnsupportedOperation);
    CHECK_THROWS_AS(acondg2(unit_disk(), unit_disk(), vec({0, 0}), vec({3, 0}), two), InvalidInput);
    const ForcingSchedule loose({0.1, 0.3, 0.1}, 0.9, 0.1, Regime::OneSet);
    CHECK_THROWS_AS(acondg2(unit_disk(), unit_disk(), vec({0, 0}), vec({0, 0}), loose), InvalidInput);
    CHECK_THROWS_AS(averaged_projection(unit_disk(), unit_disk(), vec({0, 0}), vec({0, 0}), loose),
                    InvalidInput);
    StoppingConfig bad;
    bad.eps_feas = 0.0;
    CHECK_THROWS_AS(acondg1(unit_disk(), table1_b(1.5), vec({0, 0}), one, bad), InvalidInput);
  }

  TEST_CASE("outer iteration cap") {
    StoppingConfig stop;
    stop.max_outer_iters = 3;
    const SolveReport r = acondg1(testing::experiment_ellipse(), table1_b(1.50), vec({0, 0}),
                                  ForcingSchedule::standard(Regime::OneSet), stop);
    CHECK(r.stop_code == StopCode::IterationCap);
    CHECK(r.outer_iters == 3);
  }

  TEST_CASE("inner iteration cap is flagged and the run continues") {
    CondGLimits limits;
    limits.max_inner_iters = 1;
    const SolveReport r = acondg1(testing::experiment_ellipse(), table1_b(1.50), vec({0, 0}),
                                  ForcingSchedule::standard(Regime::OneSet), {}, limits);
    CHECK(r.inner_cap_hits > 0);
    check_trace_feasible(r, testing::experiment_ellipse(), table1_b(1.50));
  }

  TEST_CASE("stop code names") {
    CHECK(stop_letter(StopCode::ConvergedFeasible) == 'C');
    CHECK(stop_letter(StopCode::LackOfProgress) == 'L');
    CHECK(stop_letter(StopCode::IterationCap) == 'I');
    CHECK(to_string(StopCode::LackOfProgress) == "LackOfProgress");
  }
}

TEST_SUITE("solver properties") {
  TEST_CASE("acondg1 iterates approach every common point") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
      const Instance inst = feasible_instance(rng, 2 + trial % 3, trial % 2 == 0);
      const SolveReport r = acondg1(inst.a, inst.b, inst.x0, ForcingSchedule::standard(Regime::OneSet));
      check_trace_feasible(r, inst.a, inst.b);
      CHECK(r.stop_code == StopCode::ConvergedFeasible);
      for (const Vector& x_bar : inst.common) {
        for (std::size_t k = 0; k + 1 < r.x_trace.size(); ++k) {
          CHECK((r.x_trace[k + 1] - x_bar).norm() <= (r.x_trace[k] - x_bar).norm() + 1e-10);
        }
      }
    }
  }

  TEST_CASE("acondg2 Lyapunov quantity never increases") {
    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
      const Instance inst = feasible_instance(rng, 2 + trial % 3, true);
      const SolveReport r = acondg2(inst.a, inst.b, inst.x0, inst.y0, ForcingSchedule::standard(Regime::TwoSets));
      check_trace_feasible(r, inst.a, inst.b);
      for (const Vector& x_bar : inst.common) {
        auto energy = [&](std::size_t k) {
          return (r.x_trace[k] - x_bar).squaredNorm() + 0.5 * (r.x_trace[k] - r.y_trace[k]).squaredNorm();
        };
        // The final row of a run that stopped after its B-step repeats x^k.
        const std::size_t rows = r.x_trace.size() - (r.partial_last_step ? 1 : 0);
        for (std::size_t k = 0; k + 1 < rows; ++k) CHECK(energy(k + 1) <= energy(k) + 1e-10);
      }
    }
  }

  TEST_CASE("acondg2 step relation") {
    Rng rng(23);
    // Disjoint box pairs can run for a very long time (Frank-Wolfe zigzags on faces); a
    // bounded prefix of the trace is enough for a per-step check.
    StoppingConfig stop;
    stop.max_outer_iters = 200;
    for (int trial = 0; trial < 60; ++trial) {
      const Eigen::Index dim = 2 + trial % 3;
      const ConvexBody a = testing::random_compact_body(rng, dim);
      const ConvexBody b = trial % 2 ? testing::random_compact_body(rng, dim)
                                     : testing::translated(a, 3.0 * testing::unit_vector(rng, dim));
      const SolveReport r = acondg2(a, b, testing::sample_member(a, rng), testing::sample_member(b, rng),
                                    ForcingSchedule::standard(Regime::TwoSets), stop);
      check_trace_feasible(r, a, b);
      const std::size_t rows = r.x_trace.size() - (r.partial_last_step ? 1 : 0);
      for (std::size_t k = 0; k + 1 < rows; ++k) {
        CHECK((r.x_trace[k + 1] - r.y_trace[k + 1]).norm() <= 3.0 * (r.x_trace[k] - r.y_trace[k + 1]).norm() + 1e-10);
      }
    }
  }

  TEST_CASE("empty intersection: ellipse and halfspace") {
    Rng rng(24);
    for (int trial = 0; trial < 40; ++trial) {
      const Ellipsoid a = testing::random_ellipsoid(rng, 2);
      const Vector n = testing::unit_vector(rng, 2);
      const Halfspace b = testing::halfspace_at_distance(a, n, testing::uniform(rng, 0.05, 1.0));
      const double d = oracles::dist_ellipse_halfspace(a, b);
      const SolveReport r = acondg1(a, b, testing::sample_member(a, rng), testing::summable_schedule(Regime::OneSet),
                                    testing::limit_stopping());
      CHECK(r.stop_code == StopCode::LackOfProgress);
      check_trace_feasible(r, a, b);
      CHECK(std::abs((r.x_last() - r.y_last()).norm() - d) <= 1e-4);
    }
  }

  TEST_CASE("empty intersection: two ellipses") {
    Rng rng(25);
    for (int trial = 0; trial < 20; ++trial) {
      const Ellipsoid a = testing::random_ellipsoid(rng, 2);
      const Vector dir = testing::unit_vector(rng, 2);
      const Ellipsoid b0 = testing::random_ellipsoid(rng, 2);
      const double reach = std::sqrt(dir.dot(a.shape_inverse() * dir)) + std::sqrt(dir.dot(b0.shape_inverse() * dir));
      const Ellipsoid b(a.center() + (reach + testing::uniform(rng, 0.1, 1.0)) * dir, b0.shape());
      const oracles::BodyDistance truth = oracles::dist_two_bodies(a, b);
      REQUIRE(truth.distance > 0.0);
      const SolveReport r = acondg2(a, b, testing::sample_member(a, rng), testing::sample_member(b, rng),
                                    testing::summable_schedule(Regime::TwoSets), testing::limit_stopping());
      CHECK(r.stop_code == StopCode::LackOfProgress);
      CHECK(std::abs((r.x_last() - r.y_last()).norm() - truth.distance) <= 1e-3);
    }
  }

  TEST_CASE("displacement converges to the minimal one between disjoint disks") {
    Rng rng(26);
    for (int trial = 0; trial < 40; ++trial) {
      const Ball a(testing::gaussian_vector(rng, 2), testing::uniform(rng, 0.3, 2.0));
      const double rb = testing::uniform(rng, 0.3, 2.0);
      const Vector dir = testing::unit_vector(rng, 2);
      const Vector cb = a.center() + (a.radius() + rb + testing::uniform(rng, 0.1, 2.0)) * dir;
      const Ball b(cb, rb);
      const Vector gap = a.center() - cb;
      const Vector expected = gap * (1.0 - (a.radius() + rb) / gap.norm());
      const Vector x0 = testing::sample_member(a, rng);
      const SolveReport one =
          acondg1(a, b, x0, testing::summable_schedule(Regime::OneSet), testing::limit_stopping());
      CHECK((one.x_last() - one.y_last() - expected).norm() <= 1e-4);
      const SolveReport two = acondg2(a, b, x0, testing::sample_member(b, rng),
                                      testing::summable_schedule(Regime::TwoSets), testing::limit_stopping());
      CHECK((two.x_last() - two.y_last() - expected).norm() <= 1e-4);
    }
  }

  TEST_CASE("averaged projection traces stay feasible") {
    Rng rng(27);
    StoppingConfig stop;
    stop.max_outer_iters = 200;
    for (int trial = 0; trial < 30; ++trial) {
      const Eigen::Index dim = 2 + trial % 3;
      const ConvexBody a = testing::random_compact_body(rng, dim);
      const ConvexBody b = testing::random_compact_body(rng, dim);
      const SolveReport r = averaged_projection(a, b, testing::sample_member(a, rng), testing::sample_member(b, rng),
                                                ForcingSchedule::standard(Regime::TwoSets), stop);
      check_trace_feasible(r, a, b);
      for (const Vector& z : midpoints(r)) CHECK(z.allFinite());
    }
  }
}
