#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wkam/weakkam.hpp"

namespace wkam {

namespace {

struct Mode {
  std::array<int, 2> k;
};

std::vector<Mode> fourier_modes(int dim, int max_mode) {
  std::vector<Mode> modes;
  if (dim == 1) {
    for (int k = 1; k <= max_mode; ++k) modes.push_back({{k, 0}});
    return modes;
  }
  for (int k1 = 0; k1 <= max_mode; ++k1) {
    for (int k2 = -max_mode; k2 <= max_mode; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      modes.push_back({{k1, k2}});
    }
  }
  return modes;
}

}  // namespace

double infmax_upper_bound(const HamiltonianSpec& spec, const TorusGrid& grid, CrossCheckOptions opts,
                          int* iterations_used) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const int d = grid.dim();
  const auto modes = fourier_modes(d, opts.max_mode);
  const std::size_t nc = 2 * modes.size();  // cos, sin per mode
  std::vector<double> coeff(nc, 0.0);

  // Precompute d(basis)/dq at every node: for cos(th): -2 pi k sin(th); for
  // sin(th): 2 pi k cos(th).
  const std::size_t nn = grid.size();
  std::vector<Vec> basis_grad(nn * nc);
  for (std::size_t i = 0; i < nn; ++i) {
    const Vec q = grid.node(i);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const auto& k = modes[m].k;
      const double th = kTwoPi * (k[0] * q[0] + k[1] * q[1]);
      const double s = std::sin(th), c = std::cos(th);
      basis_grad[i * nc + 2 * m] = {-kTwoPi * k[0] * s, -kTwoPi * k[1] * s};
      basis_grad[i * nc + 2 * m + 1] = {kTwoPi * k[0] * c, kTwoPi * k[1] * c};
    }
  }

  auto evaluate = [&](const std::vector<double>& a, std::size_t* arg, Vec* du_arg) {
    double worst = -1e300;
    for (std::size_t i = 0; i < nn; ++i) {
      Vec du{0.0, 0.0};
      for (std::size_t m = 0; m < nc; ++m) {
        du[0] += a[m] * basis_grad[i * nc + m][0];
        du[1] += a[m] * basis_grad[i * nc + m][1];
      }
      const double hv = spec.evaluate(grid.node(i), du).value;
      if (hv > worst) {
        worst = hv;
        *arg = i;
        *du_arg = du;
      }
    }
    return worst;
  };

  std::size_t arg = 0;
  Vec du_arg{};
  double best = evaluate(coeff, &arg, &du_arg);
  int it = 0;
  for (; it < opts.iterations; ++it) {
    const auto e = spec.evaluate(grid.node(arg), du_arg);
    std::vector<double> g(nc);
    double norm2 = 0.0;
    for (std::size_t m = 0; m < nc; ++m) {
      const Vec& b = basis_grad[arg * nc + m];
      g[m] = e.dp[0] * b[0] + e.dp[1] * b[1];
      norm2 += g[m] * g[m];
    }
    if (norm2 == 0.0) break;  // H(q*, .) stationary in every direction of the family
    const double alpha = opts.step / std::sqrt(it + 1.0) / std::sqrt(norm2);
    for (std::size_t m = 0; m < nc; ++m) coeff[m] -= alpha * g[m];
    best = std::min(best, evaluate(coeff, &arg, &du_arg));
  }
  if (iterations_used) *iterations_used = it;
  return best;
}

CriticalValue critical_value(const ActionKernel& k, const HamiltonianSpec& spec, CrossCheckOptions opts) {
  CriticalValue out;
  out.lambda = karp_min_mean_cycle(k);
  out.c = -out.lambda / k.horizon() + 0.0;  // no negative zero
  out.crosscheck_upper = infmax_upper_bound(spec, k.grid(), opts, &out.crosscheck_iterations);
  if (out.crosscheck_upper < out.c - 10.0 * opts.tol) {
    std::ostringstream msg;
    msg << "inf-max upper bound " << out.crosscheck_upper << " is below the kernel value c=" << out.c
        << "; kernel resolution too coarse";
    throw Error(ErrorCode::kCrosscheckFail, msg.str());
  }
  return out;
}

namespace {

std::vector<double> sweep(const ActionKernel& k, double c, LaxOleinik sign, std::span<const double> u, Exec exec) {
  const double drift = c * k.horizon();
  std::vector<double> out;
  if (sign == LaxOleinik::kNegative) {
    out = min_plus_apply(k.matrix(), u, exec);
    for (double& v : out) v += drift;
  } else {
    out = max_plus_apply(k.matrix(), u, exec);
    for (double& v : out) v -= drift;
  }
  return out;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

double weak_kam_residual(const ActionKernel& k, double c, LaxOleinik sign, const GridField& u, Exec exec) {
  const auto next = sweep(k, c, sign, u.values(), exec);
  return sup_diff(next, u.values());
}

WeakKamSolution weak_kam_solve(const ActionKernel& k, double c, LaxOleinik sign, WeakKamOptions opts,
                               std::optional<GridField> initial) {
  const TorusGrid& grid = k.grid();
  if (opts.base >= grid.size()) throw Error(ErrorCode::kInvalidArgument, "normalization node out of range");
  std::vector<double> u(grid.size(), 0.0);
  if (initial) {
    if (!(initial->grid() == grid)) throw Error(ErrorCode::kInvalidArgument, "initial field grid mismatch");
    u.assign(initial->values().begin(), initial->values().end());
  }
  double change = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    auto next = sweep(k, c, sign, u, opts.exec);
    const double shift = next[opts.base];
    for (double& v : next) v -= shift;
    change = sup_diff(next, u);
    u = std::move(next);
    if (change <= opts.tol) {
      GridField field(grid, std::move(u));
      const double res = weak_kam_residual(k, c, sign, field, opts.exec);
      return {std::move(field), res, it};
    }
  }
  GridField field(grid, std::move(u));
  const double res = weak_kam_residual(k, c, sign, field, opts.exec);
  std::ostringstream msg;
  msg << "weak KAM iteration hit " << opts.max_iter << " sweeps; last change " << change;
  throw MaxIterError(msg.str(), std::move(field), res);
}

WeakKamResult conjugate_pair(const GridField& u_minus, const ActionKernel& k, double c, double tol, int max_iter,
                             Exec exec) {
  if (!(u_minus.grid() == k.grid())) throw Error(ErrorCode::kInvalidArgument, "field and kernel grids differ");
  std::vector<double> v(u_minus.values().begin(), u_minus.values().end());
  int it = 1;
  for (;; ++it) {
    if (it > max_iter) {
      GridField best(k.grid(), v);
      throw MaxIterError("conjugate pair iteration hit its cap", best,
                         weak_kam_residual(k, c, LaxOleinik::kPositive, best, exec));
    }
    auto next = sweep(k, c, LaxOleinik::kPositive, v, exec);
    double increase = 0.0;
    double change = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      increase = std::max(increase, next[i] - v[i]);
      change = std::max(change, std::abs(next[i] - v[i]));
    }
    if (increase > tol) {
      std::ostringstream msg;
      msg << "positive Lax-Oleinik iterate increased by " << increase << " (inconsistent c?)";
      throw Error(ErrorCode::kMonotonicityFail, msg.str());
    }
    v = std::move(next);
    if (change <= tol) break;
  }
  WeakKamResult r{c, u_minus, GridField(k.grid(), std::move(v)), 0.0, 0.0, it};
  for (std::size_t i = 0; i < r.u_plus.size(); ++i) {
    if (r.u_plus[i] > r.u_minus[i] + tol) {
      throw Error(ErrorCode::kMonotonicityFail, "conjugate solution exceeds u_minus");
    }
  }
  r.residual_minus = weak_kam_residual(k, c, LaxOleinik::kNegative, r.u_minus, exec);
  r.residual_plus = weak_kam_residual(k, c, LaxOleinik::kPositive, r.u_plus, exec);
  return r;
}

DiscreteGradient discrete_gradient(const GridField& u, double kink_threshold) {
  const TorusGrid& g = u.grid();
  const double n = g.n();
  const double kink = kink_threshold > 0.0 ? kink_threshold : 10.0 / n;
  DiscreteGradient out;
  out.du.assign(g.size(), Vec{0.0, 0.0});
  out.differentiable.assign(g.size(), 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int axis = 0; axis < g.dim(); ++axis) {
      const double fwd = (u[g.shifted(i, axis, 1)] - u[i]) * n;
      const double bwd = (u[i] - u[g.shifted(i, axis, -1)]) * n;
      out.du[i][axis] = 0.5 * (fwd + bwd);
      if (std::abs(fwd - bwd) > kink) out.differentiable[i] = 0;
    }
  }
  return out;
}

DominationReport domination_check(const GridField& u, double k, const HamiltonianSpec& spec,
                                  std::span<const ActionKernel> horizons, DominationOptions opts) {
  DominationReport r;
  const TorusGrid& grid = u.grid();
  const std::size_t n = grid.size();

  r.curve_margin = 1e300;
  double minus_margin = 1e300;
  double plus_margin = 1e300;
  for (const auto& kern : horizons) {
    if (!(kern.grid() == grid)) throw Error(ErrorCode::kInvalidArgument, "kernel grid differs from field grid");
    const double kt = k * kern.horizon();
    for (std::size_t a = 0; a < n; ++a) {
      const auto row = kern.matrix().row(a);
      for (std::size_t b = 0; b < n; ++b) {
        const double slack = row[b] + kt - (u[b] - u[a]);
        if (slack < r.curve_margin) {
          r.curve_margin = slack;
          r.witness_from = a;
          r.witness_to = b;
          r.witness_horizon = kern.horizon();
        }
      }
    }
    const auto tm = minplus_matvec(kern, u, LaxOleinik::kNegative);
    const auto tp = minplus_matvec(kern, u, LaxOleinik::kPositive);
    for (std::size_t i = 0; i < n; ++i) {
      minus_margin = std::min(minus_margin, kt + tm[i] - u[i]);
      plus_margin = std::min(plus_margin, u[i] + kt - tp[i]);
    }
  }
  if (horizons.empty()) r.curve_margin = minus_margin = plus_margin = 0.0;
  r.curve_test_pass = r.curve_margin >= -opts.tol;
  r.minus_form_pass = minus_margin >= -opts.tol;
  r.plus_form_pass = plus_margin >= -opts.tol;

  const auto grad = discrete_gradient(u, opts.kink_threshold);
  r.derivative_margin = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    if (!grad.differentiable[i]) {
      ++r.kink_nodes;
      continue;
    }
    const double slack = k - spec.evaluate(grid.node(i), grad.du[i]).value;
    if (slack < r.derivative_margin) {
      r.derivative_margin = slack;
      r.derivative_witness = i;
    }
  }
  if (r.kink_nodes == n) r.derivative_margin = 0.0;
  r.derivative_test_pass = r.derivative_margin >= -opts.tol;
  r.worst_margin = std::min(r.curve_margin, r.derivative_margin);
  r.pass = r.curve_test_pass && r.minus_form_pass && r.plus_form_pass && r.derivative_test_pass;
  return r;
}

}  // namespace wkam
