#include <algorithm>
#include <cmath>
#include <string>

#include "wkam/minplus.hpp"

namespace wkam {

MinPlusMatrix::MinPlusMatrix(std::size_t n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
  if (a_.size() != n_ * n_) throw Error(ErrorCode::kInvalidArgument, "min-plus matrix entry count mismatch");
}

MinPlusMatrix MinPlusMatrix::identity(std::size_t n) {
  MinPlusMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return m;
}

MinPlusMatrix MinPlusMatrix::shifted(double delta) const {
  MinPlusMatrix out(*this);
  for (double& v : out.a_) v += delta;
  return out;
}

std::vector<double> min_plus_apply(const MinPlusMatrix& k, std::span<const double> u, Exec exec,
                                   std::vector<std::size_t>* argmin) {
  const std::size_t n = k.size();
  if (u.size() != n) throw Error(ErrorCode::kInvalidArgument, "min-plus apply: dimension mismatch");
  std::vector<double> out(n, kMinPlusZero);
  if (argmin) argmin->assign(n, 0);
  parallel_for(n, exec, [&](std::size_t i) {
    double best = kMinPlusZero;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = u[j] + k(j, i);
      if (v < best) {
        best = v;
        arg = j;
      }
    }
    out[i] = best;
    if (argmin) (*argmin)[i] = arg;
  });
  return out;
}

std::vector<double> max_plus_apply(const MinPlusMatrix& k, std::span<const double> u, Exec exec,
                                   std::vector<std::size_t>* argmax) {
  const std::size_t n = k.size();
  if (u.size() != n) throw Error(ErrorCode::kInvalidArgument, "max-plus apply: dimension mismatch");
  std::vector<double> out(n, -kMinPlusZero);
  if (argmax) argmax->assign(n, 0);
  parallel_for(n, exec, [&](std::size_t i) {
    const auto row = k.row(i);
    double best = -kMinPlusZero;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = u[j] - row[j];
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    out[i] = best;
    if (argmax) (*argmax)[i] = arg;
  });
  return out;
}

MinPlusMatrix min_plus_product(const MinPlusMatrix& a, const MinPlusMatrix& b, Exec exec) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(ErrorCode::kInvalidArgument, "min-plus product: dimension mismatch");
  MinPlusMatrix c(n);
  parallel_for(n, exec, [&](std::size_t j) {
    auto out = c.row(j);
    const auto arow = a.row(j);
    for (std::size_t k = 0; k < n; ++k) {
      const double ajk = arow[k];
      if (ajk == kMinPlusZero) continue;
      const double* brow = b.row(k).data();
      double* o = out.data();
      for (std::size_t i = 0; i < n; ++i) {
        const double v = ajk + brow[i];
        o[i] = v < o[i] ? v : o[i];
      }
    }
  });
  return c;
}

double min_mean_cycle(const MinPlusMatrix& k) {
  const std::size_t n = k.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "minimum cycle mean of an empty matrix");
  // walks[len][v]: minimal weight of a walk with exactly len edges ending at v,
  // starting anywhere.
  std::vector<std::vector<double>> walks(n + 1);
  walks[0].assign(n, 0.0);
  for (std::size_t len = 1; len <= n; ++len) walks[len] = min_plus_apply(k, walks[len - 1]);

  double best = kMinPlusZero;
  for (std::size_t v = 0; v < n; ++v) {
    const double dn = walks[n][v];
    if (dn == kMinPlusZero) continue;
    double worst = -kMinPlusZero;
    for (std::size_t len = 0; len < n; ++len) {
      const double dk = walks[len][v];
      if (dk == kMinPlusZero) continue;
      worst = std::max(worst, (dn - dk) / static_cast<double>(n - len));
    }
    best = std::min(best, worst);
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::kInvalidArgument, "matrix has no finite cycle");
  return best;
}

ActionKernel::ActionKernel(TorusGrid grid, double t, int winding, int substeps, MinPlusMatrix entries)
    : grid_(grid), t_(t), winding_(winding), substeps_(substeps), k_(std::move(entries)) {
  if (k_.size() != grid_.size()) throw Error(ErrorCode::kInvalidArgument, "kernel size does not match grid");
  if (!(t_ > 0.0)) throw Error(ErrorCode::kInvalidArgument, "kernel horizon must be positive");
  for (double v : k_.entries()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "action kernel entries must be finite");
  }
}

GridField minplus_matvec(const ActionKernel& k, const GridField& u, LaxOleinik sign, Exec exec) {
  if (!(u.grid() == k.grid())) throw Error(ErrorCode::kInvalidArgument, "field and kernel grids differ");
  auto out = sign == LaxOleinik::kNegative ? min_plus_apply(k.matrix(), u.values(), exec)
                                           : max_plus_apply(k.matrix(), u.values(), exec);
  return GridField(k.grid(), std::move(out));
}

ActionKernel minplus_matmul(const ActionKernel& k1, const ActionKernel& k2, Exec exec) {
  if (!(k1.grid() == k2.grid())) throw Error(ErrorCode::kInvalidArgument, "kernel grids differ");
  return ActionKernel(k1.grid(), k1.horizon() + k2.horizon(), std::max(k1.winding(), k2.winding()),
                      k1.substeps() + k2.substeps(), min_plus_product(k1.matrix(), k2.matrix(), exec));
}

double karp_min_mean_cycle(const ActionKernel& k) { return min_mean_cycle(k.matrix()); }

}  // namespace wkam
