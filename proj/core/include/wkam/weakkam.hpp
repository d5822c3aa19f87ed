#pragma once

// Weak KAM solutions, Mane's critical value, domination, the Peierls barrier
// and the projected Aubry set, all computed on the discrete action kernel.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wkam/minplus.hpp"
#include "wkam/systems.hpp"

namespace wkam {

struct CrossCheckOptions {
  int max_mode = 3;        // wave numbers |k|_inf <= max_mode
  int iterations = 400;    // subgradient steps
  double step = 0.05;      // initial step, decays like 1/sqrt(iter)
  double tol = 1e-3;       // CROSSCHECK_FAIL when upper < c - 10 tol
};

struct CriticalValue {
  double c = 0.0;
  double lambda = 0.0;           // minimum cycle mean of the kernel
  double crosscheck_upper = 0.0; // min over the Fourier family of max_q H(q, du)
  int crosscheck_iterations = 0;
};

/// c = -lambda / t with lambda the minimum cycle mean of K. The inf-max
/// formula over a truncated Fourier family gives an upper bound that must
/// not fall below c by more than 10 tol (kCrosscheckFail otherwise).
CriticalValue critical_value(const ActionKernel& k, const HamiltonianSpec& spec, CrossCheckOptions opts = {});

/// Inf-max upper bound on its own; returns the best bound found.
double infmax_upper_bound(const HamiltonianSpec& spec, const TorusGrid& grid, CrossCheckOptions opts,
                          int* iterations_used = nullptr);

struct WeakKamOptions {
  double tol = 1e-10;   // sup-norm change between sweeps that counts as converged
  std::size_t base = 0; // normalization node, u(base) = 0
  int max_iter = 100000;
  Exec exec{};
};

struct WeakKamSolution {
  GridField u;
  double residual = 0.0;  // |T_t u -+ c t - u|_inf
  int iterations = 0;
};

/// Thrown when the fixed-point iteration exceeds its cap. Carries the last
/// iterate and its residual.
class MaxIterError : public Error {
 public:
  MaxIterError(const std::string& what, GridField best, double residual)
      : Error(ErrorCode::kMaxIter, what), best_(std::move(best)), residual_(residual) {}
  const GridField& best() const noexcept { return best_; }
  double best_residual() const noexcept { return residual_; }

 private:
  GridField best_;
  double residual_;
};

/// Negative solution: fixed point of u -> T_t^- u + c t.
/// Positive solution: fixed point of u -> T_t^+ u - c t.
/// Each sweep is renormalized to u(base) = 0.
WeakKamSolution weak_kam_solve(const ActionKernel& k, double c, LaxOleinik sign, WeakKamOptions opts = {},
                               std::optional<GridField> initial = std::nullopt);

/// Residual |T_t u -+ c t - u|_inf of a candidate solution.
double weak_kam_residual(const ActionKernel& k, double c, LaxOleinik sign, const GridField& u, Exec exec = {});

struct WeakKamResult {
  double c = 0.0;
  GridField u_minus;
  GridField u_plus;
  double residual_minus = 0.0;
  double residual_plus = 0.0;
  int iterations = 0;
};

/// u_plus = lim (T_t^+)^k u_minus - k c t, without renormalization. The
/// sequence must be nonincreasing; an increase beyond tol throws
/// kMonotonicityFail.
WeakKamResult conjugate_pair(const GridField& u_minus, const ActionKernel& k, double c, double tol = 1e-10,
                             int max_iter = 100000, Exec exec = {});

struct DominationOptions {
  double tol = 1e-6;
  /// One-sided differences further apart than this mark a kink; 0 means 10/n.
  double kink_threshold = 0.0;
};

struct DominationReport {
  bool pass = false;
  bool curve_test_pass = false;       // u(b) - u(a) <= A_t(a,b) + k t + tol
  bool minus_form_pass = false;       // u <= k t + T_t^- u + tol
  bool plus_form_pass = false;        // T_t^+ u - k t <= u + tol
  bool derivative_test_pass = false;  // H(q, du) <= k + tol off kinks
  double curve_margin = 0.0;          // min slack of the curve test
  double derivative_margin = 0.0;     // min of k - H(q, du)
  double worst_margin = 0.0;
  // Witness of the worst violation (or tightest slack).
  std::size_t witness_from = 0;
  std::size_t witness_to = 0;
  double witness_horizon = 0.0;  // 0 for the derivative test
  std::size_t derivative_witness = 0;
  std::size_t kink_nodes = 0;
};

/// Checks u < L + k on the given horizons (discrete curve test, with both
/// semigroup forms) and through the almost-everywhere derivative criterion.
DominationReport domination_check(const GridField& u, double k, const HamiltonianSpec& spec,
                                  std::span<const ActionKernel> horizons, DominationOptions opts = {});

/// Central differences along each axis with a kink flag per node.
struct DiscreteGradient {
  std::vector<Vec> du;
  std::vector<std::uint8_t> differentiable;
};
DiscreteGradient discrete_gradient(const GridField& u, double kink_threshold = 0.0);

struct AubrySet {
  std::vector<std::uint8_t> mask;
  std::vector<std::size_t> nodes;
  double tol = 0.0;
  bool widened = false;
};

struct BarrierOptions {
  double tol = 1e-6;  // stabilization tolerance, also the diagonal floor
  int window = 16;    // trailing powers entering the entrywise minimum
  int max_iter = 4000;
  int stable_sweeps = 4;
  double aubry_tol = 0.0;  // 0 means 5/n
  Exec exec{};
};

struct BarrierResult {
  TorusGrid grid;
  double c = 0.0;
  double horizon = 0.0;  // t of the underlying kernel
  MinPlusMatrix h;       // h(from, to)
  double diag_min = 0.0;
  int window_first = 0;  // exponents of the powers in the final window
  int window_last = 0;
  AubrySet aubry;

  double operator()(std::size_t from, std::size_t to) const { return h(from, to); }
};

/// Peierls barrier as the entrywise minimum over a trailing window of
/// min-plus powers of K + c t. Throws kNoStabilize past max_iter and
/// kInvalidArgument when the shifted kernel's cycle mean is not ~0.
BarrierResult peierls_barrier(const ActionKernel& k, double c, BarrierOptions opts = {});

/// Nodes with h(q, q) <= aubry_tol (default 5/n). Never empty: with no hit
/// the tolerance widens to diag_min + tol and `widened` is set.
AubrySet aubry_set(const BarrierResult& b, double aubry_tol = 0.0, double tol = 1e-6);

struct PairReport {
  bool pass = false;
  double worst_margin = 0.0;  // min over pairs of h(a,b) - (u(b) - u(a))
  std::size_t from = 0;
  std::size_t to = 0;
};

/// u(q2) - u(q1) <= h(q1, q2) + tol on all node pairs.
PairReport barrier_bound_check(const GridField& u, const BarrierResult& b, double tol = 1e-6);

}  // namespace wkam
