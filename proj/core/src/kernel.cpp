#include <cmath>
#include <sstream>

#include "wkam/minplus.hpp"

namespace wkam {

namespace {

MinPlusMatrix one_step_kernel(const HamiltonianSpec& spec, const TorusGrid& grid, double tau, int winding,
                              Exec exec) {
  const std::size_t n = grid.size();
  const int d = grid.dim();
  MinPlusMatrix k(n);
  parallel_for(n, exec, [&](std::size_t from) {
    const Vec a = grid.node(from);
    auto row = k.row(from);
    for (std::size_t to = 0; to < n; ++to) {
      const Vec b = grid.node(to);
      // Centered representative keeps K(j, i) a function of i - j mod n
      // whenever H does not depend on q.
      const Vec delta{wrap_centered(b[0] - a[0]), d == 2 ? wrap_centered(b[1] - a[1]) : 0.0};
      double best = kMinPlusZero;
      const int w2max = d == 2 ? winding : 0;
      for (int w1 = -winding; w1 <= winding; ++w1) {
        for (int w2 = -w2max; w2 <= w2max; ++w2) {
          const Vec disp{delta[0] + w1, delta[1] + w2};
          const Vec mid{a[0] + 0.5 * disp[0], a[1] + 0.5 * disp[1]};
          const Vec vel{disp[0] / tau, disp[1] / tau};
          double cost;
          try {
            cost = tau * legendre_lagrangian(spec, mid, vel);
          } catch (const Error& e) {
            std::ostringstream msg;
            msg << "one-step velocity (" << vel[0] << ", " << vel[1] << ") outside the Legendre convergence region: "
                << e.what();
            throw Error(ErrorCode::kResolution, msg.str());
          }
          if (cost < best) best = cost;
        }
      }
      row[to] = best;
    }
  });
  return k;
}

}  // namespace

ActionKernel assemble_kernel(const HamiltonianSpec& spec, const TorusGrid& grid, KernelParams params, Exec exec) {
  if (!(params.t > 0.0) || params.substeps < 1 || params.winding < 1) {
    throw Error(ErrorCode::kInvalidArgument, "kernel needs t > 0, m >= 1, W >= 1");
  }
  if (spec.dim() != grid.dim()) throw Error(ErrorCode::kInvalidArgument, "Hamiltonian and grid dimensions differ");
  const double tau = params.t / params.substeps;
  const double quantum = 1.0 / (grid.n() * tau);
  if (quantum > 1.0) {
    std::ostringstream msg;
    msg << "velocity quantum 1/(n*tau) = " << quantum << " exceeds 1; increase n or t/m";
    throw Error(ErrorCode::kResolution, msg.str());
  }
  const MinPlusMatrix step = one_step_kernel(spec, grid, tau, params.winding, exec);
  MinPlusMatrix k = step;
  for (int s = 1; s < params.substeps; ++s) k = min_plus_product(k, step, exec);
  return ActionKernel(grid, params.t, params.winding, params.substeps, std::move(k));
}

}  // namespace wkam
