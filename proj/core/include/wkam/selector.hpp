#pragma once

// Function selector for exact Lagrangian curves in T*T^1: fiber branches of
// the curve, their primitive values, the selected function Phi and checks of
// the selector axioms.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wkam/systems.hpp"

namespace wkam {

struct CurvePoint {
  double q = 0.0;  // in [0, 1)
  double p = 0.0;
};

/// Closed, oriented, sampled curve in T*T^1. Consecutive samples are at most
/// 4 / size() apart in the max-norm of (wrapped dq, dp). A trailing sample
/// repeating the first one is dropped.
class LagrangianCurve {
 public:
  static constexpr std::size_t kMinSamples = 64;

  explicit LagrangianCurve(std::vector<CurvePoint> samples);

  std::size_t size() const noexcept { return pts_.size(); }
  const CurvePoint& operator[](std::size_t k) const { return pts_[k]; }
  const std::vector<CurvePoint>& samples() const noexcept { return pts_; }

  /// Wrapped q increment from sample k to sample k+1 (cyclic).
  double dq(std::size_t k) const;
  double dp(std::size_t k) const { return pts_[(k + 1) % pts_.size()].p - pts_[k].p; }
  /// Net number of turns of the projection to T^1.
  long winding() const;
  /// Sample indices where dq changes sign (cyclically).
  std::vector<std::size_t> fold_samples() const;
  std::size_t fold_count() const { return fold_samples().size(); }
  double max_abs_p() const;

  /// Phase-space distance from (q, p) to the closed polyline, q periodic.
  double distance(double q, double p) const;

 private:
  std::vector<CurvePoint> pts_;
};

/// Liouville integral of p dq over the closed polyline (trapezoidal rule,
/// winding-aware dq).
double exactness_check(const LagrangianCurve& curve);

struct Branch {
  double p = 0.0;
  double s_value = 0.0;   // primitive of p dq along the curve from sample 0
  std::size_t segment = 0;
};

/// Fiber crossings of the curve at every grid node, sorted by p.
struct BranchTable {
  TorusGrid grid;
  double offset = 0.0;  // fibers sit at node(i) + offset
  std::vector<std::vector<Branch>> branches;
  std::size_t fold_count = 0;

  std::size_t branch_count(std::size_t node) const { return branches[node].size(); }
};

/// Intersects the polyline with each vertical fiber q = i/n + offset and
/// records (p, S) per crossing, with S the exact integral of the piecewise
/// linear p dq from sample 0. Expects an exact curve.
/// Throws kUnsupportedDimension for d != 1 and kFoldOnNode when a fold sample
/// lies within 1e-9 of a fiber.
BranchTable branch_decompose(const LagrangianCurve& curve, const TorusGrid& grid, double offset = 0.0);

/// Phi(q) = min_k S_k(q). Throws kInvalidArgument when some fiber is not
/// crossed (the curve does not project onto the circle).
GridField selector(const BranchTable& table);

struct SelectorAxiomOptions {
  double dist_tol = 0.0;        // 0 means 2/n
  double val_tol = 1e-6;
  double kink_threshold = 0.0;  // 0 means 10/n
};

struct SelectorAxiomReport {
  bool pass = false;
  std::size_t differentiable_nodes = 0;
  std::size_t exceptional_nodes = 0;
  double exceptional_fraction = 0.0;
  double allowed_fraction = 0.0;  // 2 * folds / n
  std::size_t graph_failures = 0;     // (q, dPhi) off the curve
  std::size_t value_failures = 0;     // Phi != S of the matched branch
  std::size_t critical_failures = 0;  // Phi not a branch value at all
  double max_curve_distance = 0.0;
  double max_value_gap = 0.0;
  double max_critical_gap = 0.0;
  std::size_t witness = 0;  // node of the largest curve distance
  std::vector<std::uint8_t> differentiable;
};

SelectorAxiomReport selector_axiom_check(const GridField& phi, const BranchTable& table, const LagrangianCurve& curve,
                                         SelectorAxiomOptions opts = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

/// Hull of difference quotients near a node: one-sided quotients at the node
/// over scales 1, 2, 4, 8 grid steps, plus the unit quotients at its two
/// neighbours. A discrete stand-in for the convex hull of limiting gradients.
Interval limiting_differentials(const GridField& phi, std::size_t node);

}  // namespace wkam
