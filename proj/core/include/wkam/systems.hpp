#pragma once

// Tonelli Hamiltonians on T*T^d (d = 1, 2), periodic grids and functions on
// them, the fiberwise Legendre transform and Hamiltonian flows.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "wkam/error.hpp"

namespace wkam {

/// Point or covector in R^d. Components past dim() are kept at zero.
using Vec = std::array<double, 2>;

/// Maps x to [0, 1).
double wrap_unit(double x);

/// Signed representative of x modulo 1 in [-1/2, 1/2).
double wrap_centered(double x);

/// Uniform periodic grid on the unit torus [0,1)^d with n points per axis.
class TorusGrid {
 public:
  TorusGrid(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double spacing() const noexcept { return 1.0 / n_; }
  /// Total number of nodes, n^d.
  std::size_t size() const noexcept { return size_; }

  /// Per-axis integer coordinates of a flat node index.
  std::array<int, 2> coords(std::size_t index) const;
  /// Flat index of integer coordinates; every axis wraps modulo n.
  std::size_t index(std::array<int, 2> ij) const;
  /// Position node(i) = i / n componentwise.
  Vec node(std::size_t index) const;
  /// Neighbour of a node shifted by `step` along `axis` (wrapping).
  std::size_t shifted(std::size_t index, int axis, int step) const;

  /// Same dimension, twice as many points per axis.
  TorusGrid refined() const { return TorusGrid(dim_, 2 * n_); }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int dim_;
  int n_;
  std::size_t size_;
};

/// Real-valued function sampled at the nodes of a TorusGrid. Values are
/// always finite.
class GridField {
 public:
  explicit GridField(TorusGrid grid, double fill = 0.0);
  GridField(TorusGrid grid, std::vector<double> values);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  /// Checked write; rejects non-finite values.
  void set(std::size_t i, double value);

  std::span<const double> values() const noexcept { return values_; }

  /// Returns the field shifted by a constant so that value(base) == 0.
  GridField rebased(std::size_t base = 0) const;

  double max_abs_difference(const GridField& other) const;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

/// Truncated real Fourier series on T^d:
///   f(q) = sum_k a_k cos(2 pi k.q) + b_k sin(2 pi k.q).
class FourierSeries {
 public:
  struct Term {
    std::array<int, 2> k{0, 0};
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
  };

  FourierSeries() = default;
  FourierSeries(int dim, std::vector<Term> terms);

  int dim() const noexcept { return dim_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  double value(const Vec& q) const;
  Vec gradient(const Vec& q) const;
  std::array<Vec, 2> hessian(const Vec& q) const;

  /// Samples the series at every node of the grid.
  GridField sample(const TorusGrid& grid) const;

 private:
  int dim_ = 1;
  std::vector<Term> terms_;
};

struct PhasePoint {
  Vec q{0.0, 0.0};  // stored in [0,1)^d
  Vec p{0.0, 0.0};
};

PhasePoint make_phase_point(int dim, const Vec& q, const Vec& p);

/// Value and derivatives of H at one phase point.
struct HamiltonianEval {
  double value = 0.0;
  Vec dq{0.0, 0.0};
  Vec dp{0.0, 0.0};
  std::array<Vec, 2> dpp{Vec{0.0, 0.0}, Vec{0.0, 0.0}};
};

enum class Family { kMechanical, kAdapted, kCustom };

/// An evaluable Tonelli Hamiltonian.
///
/// MECHANICAL: H = |p|^2 / 2 + V(q).
/// ADAPTED:    H = |p - du(q)|^2 / 2. The graph {p = du} is an invariant
///             exact Lagrangian graph made entirely of fixed points, which
///             makes every downstream quantity available in closed form.
/// CUSTOM:     user callable returning value, gradients and fiber Hessian.
///
/// Fiber convexity and growth are sampled on |p| <= p_max at construction;
/// a spec that fails the sampling throws kInvalidArgument.
class HamiltonianSpec {
 public:
  using Callable = std::function<HamiltonianEval(const Vec& q, const Vec& p)>;

  static HamiltonianSpec mechanical(FourierSeries potential, double p_max = 10.0);
  static HamiltonianSpec adapted(FourierSeries generating, double p_max = 10.0);
  static HamiltonianSpec custom(int dim, Callable fn, double p_max = 10.0);

  Family family() const noexcept { return family_; }
  int dim() const noexcept { return dim_; }
  double p_max() const noexcept { return p_max_; }
  /// V for MECHANICAL, u for ADAPTED; empty for CUSTOM.
  const FourierSeries& series() const noexcept { return series_; }

  HamiltonianEval evaluate(const Vec& q, const Vec& p) const;
  double value(const PhasePoint& x) const { return evaluate(x.q, x.p).value; }

 private:
  HamiltonianSpec() = default;
  void validate() const;

  Family family_ = Family::kMechanical;
  int dim_ = 1;
  double p_max_ = 10.0;
  FourierSeries series_;
  Callable custom_;
};

double eval_H(const HamiltonianSpec& spec, const PhasePoint& x);

struct LegendreResult {
  double value = 0.0;      // L(q, v)
  Vec momentum{0.0, 0.0};  // maximizing p, i.e. dL/dv
  int iterations = 0;
};

/// L(q, v) = max_p (p.v - H(q, p)) by damped Newton started at p = v.
/// Converged when |dH/dp - v| <= 1e-10; throws kNoConvergence past the
/// iteration cap.
LegendreResult legendre_transform(const HamiltonianSpec& spec, const Vec& q, const Vec& v);
double legendre_lagrangian(const HamiltonianSpec& spec, const Vec& q, const Vec& v);

struct TangentPoint {
  Vec q{0.0, 0.0};
  Vec v{0.0, 0.0};
};

/// (q, p) -> (q, dH/dp(q, p)).
TangentPoint legendre_map(const HamiltonianSpec& spec, const PhasePoint& x);

struct Trajectory {
  double dt = 0.0;  // signed step actually used
  std::vector<PhasePoint> points;
};

/// Integrates the Hamiltonian vector field for time T (negative T integrates
/// backwards). MECHANICAL uses a fourth-order symmetric composition of
/// Stormer-Verlet; other families use classical RK4. The step is shrunk so an
/// integer number of steps spans |T|. Throws kEscape if |p| leaves the fiber
/// window, kInvalidArgument if dt is not in (0, 1e-2].
Trajectory flow_integrate(const HamiltonianSpec& spec, const PhasePoint& x0, double T, double dt);

}  // namespace wkam
