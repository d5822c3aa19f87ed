#pragma once

// End-to-end graph verification of a candidate invariant exact Lagrangian
// curve: each stage numerically re-runs one link of the argument that such a
// curve is the graph of the differential of a C^{1,1} weak KAM solution.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wkam/minplus.hpp"
#include "wkam/selector.hpp"
#include "wkam/systems.hpp"
#include "wkam/weakkam.hpp"

namespace wkam {

enum class Verdict { kGraph, kNotGraph, kNotInvariant, kNotExact, kInconclusive };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);
/// 0 GRAPH, 2 NOT_GRAPH / NOT_EXACT / NOT_INVARIANT, 3 INCONCLUSIVE.
int exit_code(Verdict v);

struct StageRecord {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // >= 0 when the stage passes on its own threshold
  std::string details;

  friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct VerifierReport {
  Verdict verdict = Verdict::kInconclusive;
  std::vector<StageRecord> stages;
  double k_level = 0.0;
  double c_value = 0.0;
  double hausdorff_graph_vs_curve = 0.0;

  const StageRecord* stage(std::string_view name) const;
  friend bool operator==(const VerifierReport&, const VerifierReport&) = default;
};

struct LevelSetResult {
  double k = 0.0;
  double max_deviation = 0.0;
  bool pass = false;
};

/// k = mean of H over the samples; pass iff max |H - k| <= tol.
LevelSetResult level_set_check(const HamiltonianSpec& spec, const LagrangianCurve& curve, double tol);

struct InvarianceResult {
  bool pass = false;
  double max_distance = 0.0;
  std::size_t witness_sample = 0;
  std::size_t points_flowed = 0;
};

/// Flows up to `points` evenly spaced samples for time T and measures the
/// phase distance of every recorded state to the curve polyline.
InvarianceResult invariance_check(const HamiltonianSpec& spec, const LagrangianCurve& curve, double T, double tol,
                                  double dt = 1e-3, std::size_t points = 32);

struct KEqualsC {
  bool pass = false;
  bool k_le_c = false;
  std::string diagnostic;
};

KEqualsC k_equals_c_check(double k, double c, double tol);

struct LimitCluster {
  PhasePoint center;
  std::size_t count = 0;
};

/// Cluster points of the last 20% of the orbit of x0 over time T (negative T
/// gives alpha-limits), greedily grouped in recur_tol balls; most populous
/// first.
std::vector<LimitCluster> omega_limit_points(const HamiltonianSpec& spec, const PhasePoint& x0, double T,
                                             double recur_tol, double dt = 5e-3);

struct ActionIdentity {
  double lhs = 0.0;  // integral of p . qdot
  double rhs = 0.0;  // integral of L(q, qdot) + c
  double difference = 0.0;
  bool pass = false;  // difference <= tol (1 + T)
};

/// Trapezoidal integrals along a trajectory with qdot = dH/dp.
ActionIdentity action_identity_check(const HamiltonianSpec& spec, const Trajectory& trajectory, double c,
                                     double tol = 1e-4);

struct BarrierInequality {
  double omega_margin = 0.0;  // Phi(q1) - Phi(q) - h(q, q1)
  double alpha_margin = 0.0;  // Phi(q) - Phi(q2) - h(q2, q)
  bool omega_pass = false;
  bool alpha_pass = false;
  bool pass = false;
};

BarrierInequality barrier_inequality_check(const GridField& phi, const BarrierResult& b, std::size_t q,
                                           std::size_t q1, std::size_t q2, double tol);

struct NonwanderingResult {
  bool pass = false;
  std::size_t recurrent = 0;
  std::size_t violators = 0;
  double worst_distance = 0.0;  // from a recurrent sample to the Aubry lift
  std::size_t witness_sample = 0;
};

/// Samples returning within recur_tol of themselves (after t >= 1) must lie
/// within tol of the Aubry lift {(q, p)}.
NonwanderingResult nonwandering_aubry_check(const HamiltonianSpec& spec, const LagrangianCurve& curve,
                                            const std::vector<PhasePoint>& aubry_lift, double T, double tol,
                                            double recur_tol, double dt = 5e-3, std::size_t points = 32);

struct VerifierConfig {
  int n = 256;
  KernelParams kernel{1.0, 2, 4};
  double exact_tol = 1e-6;
  double level_tol = 1e-6;
  double flow_dt = 1e-3;
  double invariance_T = 10.0;
  double invariance_tol = 1e-3;
  std::size_t invariance_points = 32;
  double c_tol = 1e-3;
  DominationOptions domination{};
  BarrierOptions barrier{};
  double limit_T = 200.0;
  double limit_dt = 5e-3;
  double recur_tol = 1e-2;
  std::size_t prop_nodes = 16;
  double prop_tol = 0.0;    // 0 means 2/n
  double lift_tol = 0.0;    // 0 means 4/n
  double nonwandering_T = 20.0;
  std::size_t nonwandering_points = 32;
  double graph_tol = 0.0;   // 0 means 2/n
  SelectorAxiomOptions selector{};
  Exec exec{};
};

/// Full pipeline for a curve in T*T^1. Always returns a report; stage
/// exceptions are recorded in the stage details.
VerifierReport verify_birkhoff(const HamiltonianSpec& spec, const LagrangianCurve& curve, VerifierConfig config = {});

/// Graph-form pipeline for d = 1 or 2: the candidate is the graph of du for a
/// supplied field u; the selector and curve-only stages are skipped. Without
/// an explicit differential, du is taken by central differences of u.
VerifierReport verify_graph_field(const HamiltonianSpec& spec, const GridField& u, VerifierConfig config = {},
                                  std::optional<std::vector<Vec>> du = std::nullopt);

/// JSON lines: one object per stage ("stage", "pass", "margin", "details"),
/// then a final {"stage": "verdict", ...} line. Doubles round-trip exactly.
void write_report_jsonl(std::ostream& os, const VerifierReport& report);
VerifierReport read_report_jsonl(std::istream& is);
void write_report_text(std::ostream& os, const VerifierReport& report);

}  // namespace wkam
