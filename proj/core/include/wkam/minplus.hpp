#pragma once

// Min-plus (tropical) linear algebra and the discrete action kernels that
// realize the Lax-Oleinik semigroups on a torus grid.

#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "wkam/parallel.hpp"
#include "wkam/systems.hpp"

namespace wkam {

inline constexpr double kMinPlusZero = std::numeric_limits<double>::infinity();

/// Dense square matrix over the (min, +) semiring, row-major.
/// Entry (j, i) is the cost of going from j to i. +inf is the semiring zero.
class MinPlusMatrix {
 public:
  MinPlusMatrix() = default;
  explicit MinPlusMatrix(std::size_t n, double fill = kMinPlusZero) : n_(n), a_(n * n, fill) {}
  MinPlusMatrix(std::size_t n, std::vector<double> entries);

  /// Diagonal 0, everything else +inf.
  static MinPlusMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t from, std::size_t to) const { return a_[from * n_ + to]; }
  double& operator()(std::size_t from, std::size_t to) { return a_[from * n_ + to]; }
  std::span<const double> row(std::size_t from) const { return {a_.data() + from * n_, n_}; }
  std::span<double> row(std::size_t from) { return {a_.data() + from * n_, n_}; }
  std::span<const double> entries() const noexcept { return a_; }

  /// Every entry shifted by a constant.
  MinPlusMatrix shifted(double delta) const;

  friend bool operator==(const MinPlusMatrix&, const MinPlusMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// out_i = min_j (u_j + K(j, i)). argmin, when requested, is the lowest
/// index attaining the minimum.
std::vector<double> min_plus_apply(const MinPlusMatrix& k, std::span<const double> u, Exec exec = {},
                                   std::vector<std::size_t>* argmin = nullptr);

/// out_i = max_j (u_j - K(i, j)).
std::vector<double> max_plus_apply(const MinPlusMatrix& k, std::span<const double> u, Exec exec = {},
                                   std::vector<std::size_t>* argmax = nullptr);

/// (A (x) B)(j, i) = min_k A(j, k) + B(k, i).
MinPlusMatrix min_plus_product(const MinPlusMatrix& a, const MinPlusMatrix& b, Exec exec = {});

/// Minimum cycle mean by Karp's dynamic program. Requires at least one
/// finite cycle; throws kInvalidArgument otherwise.
double min_mean_cycle(const MinPlusMatrix& k);

/// A_t on a torus grid: entries(j, i) ~ minimal action from node j to node i
/// in time t, built as the m-fold min-plus power of a one-step kernel at t/m
/// whose segments may wind up to W times per axis.
class ActionKernel {
 public:
  ActionKernel(TorusGrid grid, double t, int winding, int substeps, MinPlusMatrix entries);

  const TorusGrid& grid() const noexcept { return grid_; }
  double horizon() const noexcept { return t_; }
  int winding() const noexcept { return winding_; }
  int substeps() const noexcept { return substeps_; }
  const MinPlusMatrix& matrix() const noexcept { return k_; }
  double operator()(std::size_t from, std::size_t to) const { return k_(from, to); }

  friend bool operator==(const ActionKernel&, const ActionKernel&) = default;

 private:
  TorusGrid grid_;
  double t_;
  int winding_;
  int substeps_;
  MinPlusMatrix k_;
};

struct KernelParams {
  double t = 1.0;
  int winding = 2;
  int substeps = 4;
};

/// One-step rule: A_tau(a, b) = min over integer windings w, |w|_inf <= W, of
/// tau * L(midpoint of the lifted segment, (b - a + w) / tau), followed by
/// m - 1 min-plus self-compositions.
///
/// Throws kResolution if the velocity quantum 1 / (n tau) exceeds 1 (slow
/// motion cannot be represented) or if the Legendre transform fails for a
/// sampled velocity.
ActionKernel assemble_kernel(const HamiltonianSpec& spec, const TorusGrid& grid, KernelParams params,
                             Exec exec = {});

enum class LaxOleinik { kNegative, kPositive };

/// T_t^- u (kNegative) or T_t^+ u (kPositive) through the kernel.
GridField minplus_matvec(const ActionKernel& k, const GridField& u, LaxOleinik sign, Exec exec = {});

/// Kernel of T_{t+s} = T_t o T_s. Requires identical grids.
ActionKernel minplus_matmul(const ActionKernel& k1, const ActionKernel& k2, Exec exec = {});

double karp_min_mean_cycle(const ActionKernel& k);

/// Binary kernel cache: magic "WKAM1", then d (u32), n (u32), t (f64),
/// W (u32), m (u32), then N*N row-major f64 entries, all little-endian.
void write_kernel_cache(const std::filesystem::path& path, const ActionKernel& k);
ActionKernel read_kernel_cache(const std::filesystem::path& path);

}  // namespace wkam
