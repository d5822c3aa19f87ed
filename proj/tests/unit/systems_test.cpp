#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "wkam/fixtures.hpp"
#include "wkam/systems.hpp"

namespace wkam {
namespace {

using testing::kTwoPi;

// Brute-force conjugate: max over a fine p grid on [-10, 10].
double grid_legendre(const HamiltonianSpec& spec, double q, double v) {
  double best = -1e300;
  for (int i = 0; i <= 200000; ++i) {
    const double p = -10.0 + 20.0 * i / 200000.0;
    best = std::max(best, p * v - spec.evaluate({q, 0.0}, {p, 0.0}).value);
  }
  return best;
}

TEST(TorusGrid, WrapsIndicesAndRejectsSmallGrids) {
  const TorusGrid g(1, 16);
  EXPECT_EQ(g.size(), 16u);
  EXPECT_DOUBLE_EQ(g.spacing(), 1.0 / 16);
  EXPECT_EQ(g.index({-1, 0}), 15u);
  EXPECT_EQ(g.index({17, 0}), 1u);
  EXPECT_DOUBLE_EQ(g.node(4)[0], 0.25);
  const TorusGrid g2(2, 8);
  EXPECT_EQ(g2.size(), 64u);
  EXPECT_EQ(g2.shifted(g2.index({7, 3}), 0, 1), g2.index({0, 3}));
  EXPECT_THROW(TorusGrid(1, 4), Error);
  EXPECT_THROW(TorusGrid(3, 8), Error);
}

TEST(GridField, RejectsNonFiniteValues) {
  const TorusGrid g(1, 8);
  EXPECT_THROW(GridField(g, std::vector<double>(8, NAN)), Error);
  EXPECT_THROW(GridField(g, std::vector<double>(7, 0.0)), Error);
}

TEST(EvalH, ClosedForms) {
  const auto free = fixtures::free_hamiltonian();
  EXPECT_EQ(eval_H(free, make_phase_point(1, {0.3, 0}, {0, 0})), 0.0);
  const auto pend = fixtures::pendulum();
  EXPECT_NEAR(eval_H(pend, make_phase_point(1, {0, 0}, {0, 0})), 1.0, 1e-15);
  const auto ad = fixtures::adapted();
  for (double q : {0.0, 0.13, 0.5, 0.77}) {
    EXPECT_NEAR(eval_H(ad, make_phase_point(1, {q, 0}, {testing::adapted_du(q), 0})), 0.0, 1e-15);
  }
}

TEST(HamiltonianSpec, RejectsNonConvexCustomHamiltonian) {
  auto concave = [](const Vec&, const Vec& p) {
    HamiltonianEval e;
    e.value = -0.5 * p[0] * p[0];
    e.dp = {-p[0], 0};
    e.dpp = {Vec{-1, 0}, Vec{0, 0}};
    return e;
  };
  EXPECT_THROW(HamiltonianSpec::custom(1, concave), Error);
}

TEST(Legendre, MatchesBruteForceConjugate) {
  const auto free = fixtures::free_hamiltonian();
  EXPECT_NEAR(legendre_lagrangian(free, {0.1, 0}, {1.0, 0}), 0.5, 1e-12);
  const auto pend = fixtures::pendulum();
  EXPECT_NEAR(legendre_lagrangian(pend, {0, 0}, {0, 0}), -1.0, 1e-12);
  EXPECT_NEAR(legendre_lagrangian(pend, {0, 0}, {0, 0}), grid_legendre(pend, 0.0, 0.0), 1e-8);
  // H = (p - a)^2 / 2 with a constant generating slope a = 0.4.
  const double a = 0.4;
  auto tilted = HamiltonianSpec::custom(1, [a](const Vec&, const Vec& p) {
    HamiltonianEval e;
    e.value = 0.5 * (p[0] - a) * (p[0] - a);
    e.dp = {p[0] - a, 0};
    e.dpp = {Vec{1, 0}, Vec{0, 0}};
    return e;
  });
  for (double v : {-1.3, 0.0, 0.7, 2.5}) {
    EXPECT_NEAR(legendre_lagrangian(tilted, {0.2, 0}, {v, 0}), 0.5 * v * v + a * v, 1e-12);
    EXPECT_NEAR(legendre_lagrangian(tilted, {0.2, 0}, {v, 0}), grid_legendre(tilted, 0.2, v), 1e-8);
  }
}

TEST(Legendre, NoConvergenceWhenTheFiberIsFlatOutsideTheWindow) {
  // Convex on the window |p| <= 10 but saturating beyond: velocities above the
  // slope cap have no maximizer.
  auto saturating = HamiltonianSpec::custom(
      1,
      [](const Vec&, const Vec& p) {
        HamiltonianEval e;
        const double s = std::sqrt(1.0 + p[0] * p[0]);
        e.value = s;
        e.dp = {p[0] / s, 0};
        e.dpp = {Vec{1.0 / (s * s * s), 0}, Vec{0, 0}};
        return e;
      },
      0.5);
  try {
    legendre_transform(saturating, {0, 0}, {2.0, 0});
    FAIL() << "expected NO_CONVERGENCE";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoConvergence);
  }
}

TEST(Legendre, FenchelEqualityAndInvolution) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uq(0.0, 1.0), up(-3.0, 3.0);
  for (const auto& spec : {fixtures::pendulum(), fixtures::adapted(), fixtures::free_hamiltonian()}) {
    for (int i = 0; i < 200; ++i) {
      const Vec q{uq(rng), 0};
      const Vec p{up(rng), 0};
      const auto e = spec.evaluate(q, p);
      const double L = legendre_lagrangian(spec, q, e.dp);
      EXPECT_NEAR(L + e.value, p[0] * e.dp[0], 1e-8);
      // Conjugating L back: H(q,p) = max_v (p v - L(q,v)); the maximizer is v = dH/dp.
      double back = -1e300;
      for (int j = -50; j <= 50; ++j) {
        const double v = e.dp[0] + j * 1e-4;
        back = std::max(back, p[0] * v - legendre_lagrangian(spec, q, {v, 0}));
      }
      EXPECT_NEAR(back, e.value, 1e-6);
    }
  }
}

TEST(LegendreMap, MatchesFiniteDifference) {
  const auto pend = fixtures::pendulum();
  EXPECT_DOUBLE_EQ(legendre_map(fixtures::free_hamiltonian(), make_phase_point(1, {0.2, 0}, {0.3, 0})).v[0], 0.3);
  EXPECT_NEAR(legendre_map(fixtures::adapted(), make_phase_point(1, {0.3, 0}, {testing::adapted_du(0.3), 0})).v[0], 0.0,
              1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uq(0.0, 1.0), up(-3.0, 3.0);
  for (const auto& spec : {pend, fixtures::adapted()}) {
    for (int i = 0; i < 100; ++i) {
      const auto x = make_phase_point(1, {uq(rng), 0}, {up(rng), 0});
      const double h = 1e-5;
      const double fd = (spec.evaluate(x.q, {x.p[0] + h, 0}).value - spec.evaluate(x.q, {x.p[0] - h, 0}).value) / (2 * h);
      EXPECT_NEAR(legendre_map(spec, x).v[0], fd, 1e-6);
    }
  }
}

TEST(Flow, FreeMotionIsExact) {
  const auto traj = flow_integrate(fixtures::free_hamiltonian(), make_phase_point(1, {0.1, 0}, {0.5, 0}), 2.0, 1e-3);
  EXPECT_NEAR(wrap_centered(traj.points.back().q[0] - 0.1), 0.0, 1e-12);
  EXPECT_EQ(traj.points.back().p[0], 0.5);
}

TEST(Flow, AdaptedGraphPointsAreFixed) {
  const auto spec = fixtures::adapted();
  for (double q : {0.0, 0.21, 0.64}) {
    const auto x0 = make_phase_point(1, {q, 0}, {testing::adapted_du(q), 0});
    const auto traj = flow_integrate(spec, x0, 5.0, 1e-2);
    for (const auto& x : traj.points) {
      EXPECT_NEAR(wrap_centered(x.q[0] - q), 0.0, 1e-13);
      EXPECT_NEAR(x.p[0], x0.p[0], 1e-13);
    }
  }
}

TEST(Flow, ZeroDurationAndStepValidation) {
  const auto x0 = make_phase_point(1, {0.3, 0}, {0.2, 0});
  const auto traj = flow_integrate(fixtures::pendulum(), x0, 0.0, 1e-3);
  ASSERT_EQ(traj.points.size(), 1u);
  EXPECT_EQ(traj.points[0].q[0], 0.3);
  EXPECT_THROW(flow_integrate(fixtures::pendulum(), x0, 1.0, 0.05), Error);
  EXPECT_THROW(flow_integrate(fixtures::pendulum(), x0, 1.0, 0.0), Error);
}

TEST(Flow, EnergyDriftBound) {
  const double T = 10.0;
  for (const auto& [spec, x0] : {std::pair{fixtures::pendulum(), make_phase_point(1, {0.1, 0}, {1.7, 0})},
                                 std::pair{fixtures::adapted(), make_phase_point(1, {0.4, 0}, {0.9, 0})}}) {
    const auto traj = flow_integrate(spec, x0, T, 1e-3);
    const double h0 = eval_H(spec, x0);
    double drift = 0.0;
    for (const auto& x : traj.points) drift = std::max(drift, std::abs(eval_H(spec, x) - h0));
    EXPECT_LE(drift, 1e-6 * (1.0 + std::abs(h0)) * T);
  }
}

TEST(Flow, ForwardThenBackwardReturns) {
  for (const auto& spec : {fixtures::pendulum(), fixtures::adapted()}) {
    const auto x0 = make_phase_point(1, {0.37, 0}, {0.8, 0});
    const auto fwd = flow_integrate(spec, x0, 3.0, 1e-3);
    const auto back = flow_integrate(spec, fwd.points.back(), -3.0, 1e-3);
    EXPECT_NEAR(wrap_centered(back.points.back().q[0] - x0.q[0]), 0.0, 1e-6);
    EXPECT_NEAR(back.points.back().p[0], x0.p[0], 1e-6);
  }
}

TEST(Flow, EscapeOutsideTheFiberWindow) {
  auto steep = HamiltonianSpec::mechanical(FourierSeries(1, {{{1, 0}, 40.0, 0.0}}), 10.0);
  try {
    flow_integrate(steep, make_phase_point(1, {0.25, 0}, {9.5, 0}), 5.0, 1e-3);
    FAIL() << "expected ESCAPE";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEscape);
  }
}

TEST(FourierSeries, GradientMatchesFiniteDifferences2D) {
  const auto u = fixtures::adapted_potential_2d();
  const Vec q{0.31, 0.72};
  const double h = 1e-6;
  const auto g = u.gradient(q);
  EXPECT_NEAR(g[0], (u.value({q[0] + h, q[1]}) - u.value({q[0] - h, q[1]})) / (2 * h), 1e-7);
  EXPECT_NEAR(g[1], (u.value({q[0], q[1] + h}) - u.value({q[0], q[1] - h})) / (2 * h), 1e-7);
}

}  // namespace
}  // namespace wkam
