#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "wkam/verifier.hpp"

namespace wkam {
namespace {

using testing::kTwoPi;

LagrangianCurve adapted_graph(std::size_t samples = 512) {
  return fixtures::graph_of_differential(fixtures::adapted_potential(), samples);
}

LagrangianCurve pendulum_level(double energy) {
  return fixtures::graph_curve([energy](double q) { return std::sqrt(2.0 * (energy - std::cos(kTwoPi * q))); });
}

const VerifierReport& adapted_report() {
  static const VerifierReport r = verify_birkhoff(fixtures::adapted(), adapted_graph());
  return r;
}

TEST(LevelSet, Examples) {
  const auto a = level_set_check(fixtures::adapted(), adapted_graph(), 1e-6);
  EXPECT_TRUE(a.pass);
  EXPECT_NEAR(a.k, 0.0, 1e-10);
  EXPECT_LE(a.max_deviation, 1e-10);
  const auto z = level_set_check(fixtures::free_hamiltonian(), fixtures::zero_section(), 1e-6);
  EXPECT_TRUE(z.pass);
  EXPECT_EQ(z.k, 0.0);
  const auto f = level_set_check(fixtures::pendulum(), fixtures::fold_curve(), 1e-6);
  EXPECT_FALSE(f.pass);
  EXPECT_GT(f.max_deviation, 0.5);
  const auto l = level_set_check(fixtures::pendulum(), pendulum_level(2.0), 1e-6);
  EXPECT_TRUE(l.pass);
  EXPECT_NEAR(l.k, 2.0, 1e-9);
}

TEST(Invariance, Examples) {
  const auto a = invariance_check(fixtures::adapted(), adapted_graph(), 10.0, 1e-3);
  EXPECT_TRUE(a.pass);
  EXPECT_LE(a.max_distance, 1e-8);
  EXPECT_EQ(a.points_flowed, 32u);
  EXPECT_TRUE(invariance_check(fixtures::free_hamiltonian(), fixtures::zero_section(), 10.0, 1e-3).pass);
  // Invariant but not exact.
  EXPECT_TRUE(invariance_check(fixtures::free_hamiltonian(), fixtures::constant_circle(0.3), 1.0, 1e-3).pass);
  // A rotational level curve of the pendulum is invariant.
  EXPECT_TRUE(invariance_check(fixtures::pendulum(), pendulum_level(2.0), 5.0, 1e-3).pass);
  // The zero section is not invariant under the pendulum.
  const auto z = invariance_check(fixtures::pendulum(), fixtures::zero_section(), 1.0, 1e-3);
  EXPECT_FALSE(z.pass);
  EXPECT_GT(z.max_distance, 0.1);
}

TEST(KEqualsC, Diagnostics) {
  EXPECT_TRUE(k_equals_c_check(0.0, 0.0, 1e-3).pass);
  EXPECT_TRUE(k_equals_c_check(1.0005, 1.0, 1e-3).pass);
  const auto low = k_equals_c_check(0.5, 1.0, 1e-3);
  EXPECT_FALSE(low.pass);
  EXPECT_TRUE(low.k_le_c);
  EXPECT_NE(low.diagnostic.find("k<c"), std::string::npos);
  const auto high = k_equals_c_check(1.5, 1.0, 1e-3);
  EXPECT_FALSE(high.pass);
  EXPECT_FALSE(high.k_le_c);
  EXPECT_NE(high.diagnostic.find("resolution"), std::string::npos);
}

TEST(OmegaLimits, FixedPointsAndSeparatrix) {
  const auto spec = fixtures::adapted();
  const double q0 = 0.3;
  const auto x0 = make_phase_point(1, {q0, 0}, {fixtures::adapted_potential().gradient({q0, 0})[0], 0});
  const auto fixed = omega_limit_points(spec, x0, 50.0, 1e-2);
  ASSERT_EQ(fixed.size(), 1u);
  EXPECT_NEAR(fixed[0].center.q[0], q0, 1e-9);

  const auto rest = omega_limit_points(fixtures::free_hamiltonian(), make_phase_point(1, {0.7, 0}, {0, 0}), 50.0, 1e-2);
  ASSERT_EQ(rest.size(), 1u);
  EXPECT_NEAR(rest[0].center.q[0], 0.7, 1e-12);
  EXPECT_EQ(rest[0].center.p[0], 0.0);

  // Upper separatrix: p = 2 sin(pi q) accumulates at the hyperbolic point.
  const auto sep = omega_limit_points(fixtures::pendulum(), make_phase_point(1, {0.5, 0}, {2.0, 0}), 200.0, 1e-2);
  ASSERT_FALSE(sep.empty());
  const double dq = std::abs(wrap_centered(sep[0].center.q[0]));
  EXPECT_LE(std::hypot(dq, sep[0].center.p[0]), 0.05);
}

TEST(ActionIdentity, Examples) {
  const auto pend = fixtures::pendulum();
  const auto orbit = flow_integrate(pend, make_phase_point(1, {0, 0}, {std::sqrt(2.0), 0}), 5.0, 1e-3);
  const auto r = action_identity_check(pend, orbit, 2.0);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.difference, 1e-4);

  const auto free = fixtures::free_hamiltonian();
  const double T = 4.0;
  const auto line = flow_integrate(free, make_phase_point(1, {0.1, 0}, {0.5, 0}), T, 1e-3);
  const auto f = action_identity_check(free, line, 0.125);
  EXPECT_NEAR(f.lhs, 0.25 * T, 1e-9);
  EXPECT_NEAR(f.rhs, 0.25 * T, 1e-6);
  EXPECT_TRUE(f.pass);
  // A wrong constant breaks it.
  EXPECT_FALSE(action_identity_check(free, line, 0.5).pass);
}

TEST(BarrierInequalities, AdaptedAndPendulum) {
  const auto& b = testing::adapted_barrier();
  std::vector<double> u(256);
  for (std::size_t i = 0; i < 256; ++i) u[i] = testing::adapted_u(i / 256.0);
  const GridField phi(b.grid, u);
  for (std::size_t q : {0u, 50u, 130u}) {
    const auto same = barrier_inequality_check(phi, b, q, q, q, 1e-6);
    EXPECT_TRUE(same.pass);
    EXPECT_NEAR(same.omega_margin, 0.0, 2e-6);
    EXPECT_NEAR(same.alpha_margin, 0.0, 2e-6);
  }
  const auto far = barrier_inequality_check(phi, b, 30, 90, 200, 1e-6);
  EXPECT_NEAR(far.omega_margin, 0.0, 1e-2);
  EXPECT_NEAR(far.alpha_margin, 0.0, 1e-2);

  // Pendulum: on the graph of du_-, points come from the hyperbolic point in
  // the past, so the alpha inequality holds with q2 = 0. The omega inequality
  // holds for u_+.
  const auto& pb = testing::pendulum_barrier();
  const auto& pair = testing::pendulum_pair();
  for (std::size_t q : {20u, 64u, 100u, 180u}) {
    const auto m = barrier_inequality_check(pair.u_minus, pb, q, 0, 0, 1e-6);
    EXPECT_TRUE(m.alpha_pass) << q << " margin " << m.alpha_margin;
    EXPECT_FALSE(m.omega_pass) << q;
    const auto p = barrier_inequality_check(pair.u_plus, pb, q, 0, 0, 1e-6);
    EXPECT_TRUE(p.omega_pass) << q << " margin " << p.omega_margin;
    EXPECT_FALSE(p.alpha_pass) << q;
  }
}

TEST(Nonwandering, AubryLift) {
  const std::vector<PhasePoint> origin{make_phase_point(1, {0, 0}, {0, 0})};
  const auto z = nonwandering_aubry_check(fixtures::free_hamiltonian(), fixtures::zero_section(), {}, 20.0, 1e-2, 1e-2);
  // Every point of the zero section is recurrent; an empty lift cannot host them.
  EXPECT_FALSE(z.pass);
  EXPECT_EQ(z.recurrent, 32u);

  std::vector<PhasePoint> lift;
  for (int i = 0; i < 256; ++i) lift.push_back(make_phase_point(1, {i / 256.0, 0}, {0, 0}));
  EXPECT_TRUE(nonwandering_aubry_check(fixtures::free_hamiltonian(), fixtures::zero_section(), lift, 20.0, 1e-2, 1e-2).pass);

  const auto level = nonwandering_aubry_check(fixtures::pendulum(), pendulum_level(2.0), origin, 20.0, 1e-2, 1e-2);
  EXPECT_FALSE(level.pass);
  EXPECT_GT(level.violators, 0u);
  EXPECT_GT(level.worst_distance, 1.0);
}

TEST(Verifier, AdaptedGraphIsAGraph) {
  const auto& r = adapted_report();
  EXPECT_EQ(r.verdict, Verdict::kGraph);
  for (const auto& s : r.stages) EXPECT_TRUE(s.pass) << s.name << ": " << s.details;
  EXPECT_NEAR(r.c_value, 0.0, 1e-3);
  EXPECT_LE(r.hausdorff_graph_vs_curve, 2.0 / 256);
  ASSERT_NE(r.stage("injectivity"), nullptr);
  EXPECT_TRUE(r.stage("injectivity")->pass);
}

TEST(Verifier, ZeroSectionOfFreeHamiltonian) {
  const auto r = verify_birkhoff(fixtures::free_hamiltonian(), fixtures::zero_section());
  EXPECT_EQ(r.verdict, Verdict::kGraph);
}

TEST(Verifier, CircleIsNotExactAndFoldIsNotInvariant) {
  const auto circle = verify_birkhoff(fixtures::free_hamiltonian(), fixtures::constant_circle(0.3));
  EXPECT_EQ(circle.verdict, Verdict::kNotExact);
  ASSERT_EQ(circle.stages.size(), 1u);
  EXPECT_NEAR(circle.stages[0].margin, 1e-6 - 0.3, 1e-9);

  const auto fold = verify_birkhoff(fixtures::pendulum(), fixtures::fold_curve());
  EXPECT_EQ(fold.verdict, Verdict::kNotInvariant);
  EXPECT_FALSE(fold.stage("level_set")->pass);
}

TEST(Verifier, FailingLateStageIsInconclusive) {
  VerifierConfig cfg;
  cfg.graph_tol = 1e-9;
  const auto r = verify_birkhoff(fixtures::adapted(), adapted_graph(), cfg);
  EXPECT_EQ(r.verdict, Verdict::kInconclusive);
  EXPECT_FALSE(r.stage("hausdorff")->pass);
}

TEST(Verifier, TwoDimensionalGraphForm) {
  const TorusGrid g(2, 16);
  const auto u = fixtures::adapted_potential_2d();
  std::vector<double> values(g.size());
  std::vector<Vec> du(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    values[i] = u.value(g.node(i));
    du[i] = u.gradient(g.node(i));
  }
  VerifierConfig cfg;
  cfg.n = 16;
  cfg.level_tol = 1e-4;
  cfg.invariance_tol = 1e-2;
  cfg.domination.tol = 1e-4;
  cfg.exec.threads = 4;
  const auto r = verify_graph_field(fixtures::adapted(2), GridField(g, values), cfg, du);
  EXPECT_EQ(r.verdict, Verdict::kGraph);
  for (const auto& s : r.stages) EXPECT_TRUE(s.pass) << s.name << ": " << s.details;
}

TEST(VerifierProperties, StableUnderRefinementAndThreads) {
  VerifierConfig coarse;
  coarse.n = 128;
  const auto r128 = verify_birkhoff(fixtures::adapted(), adapted_graph(), coarse);
  EXPECT_EQ(r128.verdict, adapted_report().verdict);
  // Halving the spacing at least halves the graph/curve distance.
  EXPECT_LE(adapted_report().hausdorff_graph_vs_curve, 0.5 * r128.hausdorff_graph_vs_curve);

  VerifierConfig threaded;
  threaded.exec.threads = 3;
  EXPECT_EQ(verify_birkhoff(fixtures::adapted(), adapted_graph(), threaded), adapted_report());
}

TEST(VerifierProperties, TighterTolerancesNeverProduceAGraph) {
  for (double scale : {1.0, 0.1, 0.01}) {
    VerifierConfig cfg;
    cfg.n = 64;
    cfg.exact_tol *= scale;
    cfg.level_tol *= scale;
    cfg.invariance_tol *= scale;
    cfg.c_tol *= scale;
    EXPECT_NE(verify_birkhoff(fixtures::free_hamiltonian(), fixtures::constant_circle(0.3), cfg).verdict,
              Verdict::kGraph);
    EXPECT_NE(verify_birkhoff(fixtures::pendulum(), fixtures::fold_curve(), cfg).verdict, Verdict::kGraph);
    EXPECT_NE(verify_birkhoff(fixtures::pendulum(), pendulum_level(2.0), cfg).verdict, Verdict::kGraph);
  }
}

TEST(VerifierProperties, GraphImpliesInjectiveProjection) {
  for (const auto* r : {&adapted_report()}) {
    if (r->verdict == Verdict::kGraph) EXPECT_TRUE(r->stage("injectivity")->pass);
  }
}

TEST(Verdict, NamesAndExitCodes) {
  for (auto v : {Verdict::kGraph, Verdict::kNotGraph, Verdict::kNotInvariant, Verdict::kNotExact,
                 Verdict::kInconclusive}) {
    EXPECT_EQ(verdict_from_string(to_string(v)), v);
  }
  EXPECT_EQ(to_string(Verdict::kNotGraph), "NOT_GRAPH");
  EXPECT_EQ(exit_code(Verdict::kGraph), 0);
  EXPECT_EQ(exit_code(Verdict::kNotExact), 2);
  EXPECT_EQ(exit_code(Verdict::kInconclusive), 3);
  EXPECT_THROW(verdict_from_string("MAYBE"), Error);
}

TEST(ReportIo, JsonlRoundTripIsExact) {
  VerifierReport r = adapted_report();
  r.stages.push_back({"odd", false, 1.0 / 3.0, "quote \" and\nnewline"});
  r.hausdorff_graph_vs_curve = 1e-300;
  std::stringstream ss;
  write_report_jsonl(ss, r);
  EXPECT_EQ(read_report_jsonl(ss), r);

  std::stringstream bad("{\"stage\": \"exactness\", \"pass\": true, \"margin\": 0, \"details\": \"\"}\n");
  EXPECT_THROW(read_report_jsonl(bad), Error);
  std::stringstream junk("not json\n");
  EXPECT_THROW(read_report_jsonl(junk), Error);

  std::ostringstream text;
  write_report_text(text, r);
  EXPECT_NE(text.str().find("GRAPH"), std::string::npos);
  EXPECT_NE(text.str().find("injectivity"), std::string::npos);
}

}  // namespace
}  // namespace wkam
