#include <cmath>
#include <string>

#include "wkam/systems.hpp"

namespace wkam {

namespace {

struct State {
  Vec q;  // unwrapped while integrating
  Vec p;
};

// Yoshida triple-jump weights; w1 + w0 + w1 = 1.
const double kCbrt2 = std::cbrt(2.0);
const double kW1 = 1.0 / (2.0 - kCbrt2);
const double kW0 = -kCbrt2 / (2.0 - kCbrt2);

void verlet_step(const HamiltonianSpec& spec, State& s, double h) {
  const int d = spec.dim();
  Vec g = spec.series().gradient(s.q);
  for (int r = 0; r < d; ++r) s.p[r] -= 0.5 * h * g[r];
  for (int r = 0; r < d; ++r) s.q[r] += h * s.p[r];
  g = spec.series().gradient(s.q);
  for (int r = 0; r < d; ++r) s.p[r] -= 0.5 * h * g[r];
}

void composed_verlet_step(const HamiltonianSpec& spec, State& s, double h) {
  verlet_step(spec, s, kW1 * h);
  verlet_step(spec, s, kW0 * h);
  verlet_step(spec, s, kW1 * h);
}

State field(const HamiltonianSpec& spec, const State& s) {
  const auto e = spec.evaluate(s.q, s.p);
  return {e.dp, {-e.dq[0], -e.dq[1]}};
}

void rk4_step(const HamiltonianSpec& spec, State& s, double h) {
  auto axpy = [](const State& a, const State& k, double c) {
    return State{{a.q[0] + c * k.q[0], a.q[1] + c * k.q[1]}, {a.p[0] + c * k.p[0], a.p[1] + c * k.p[1]}};
  };
  const State k1 = field(spec, s);
  const State k2 = field(spec, axpy(s, k1, 0.5 * h));
  const State k3 = field(spec, axpy(s, k2, 0.5 * h));
  const State k4 = field(spec, axpy(s, k3, h));
  for (int r = 0; r < 2; ++r) {
    s.q[r] += h / 6.0 * (k1.q[r] + 2.0 * k2.q[r] + 2.0 * k3.q[r] + k4.q[r]);
    s.p[r] += h / 6.0 * (k1.p[r] + 2.0 * k2.p[r] + 2.0 * k3.p[r] + k4.p[r]);
  }
  if (spec.dim() == 1) s.q[1] = s.p[1] = 0.0;
}

}  // namespace

Trajectory flow_integrate(const HamiltonianSpec& spec, const PhasePoint& x0, double T, double dt) {
  if (!(dt > 0.0) || dt > 1e-2) {
    throw Error(ErrorCode::kInvalidArgument, "flow step must lie in (0, 1e-2]");
  }
  if (!std::isfinite(T)) throw Error(ErrorCode::kInvalidArgument, "flow duration must be finite");
  const int d = spec.dim();
  Trajectory traj;
  traj.points.push_back(make_phase_point(d, x0.q, x0.p));
  if (T == 0.0) {
    traj.dt = 0.0;
    return traj;
  }
  const auto steps = static_cast<long>(std::ceil(std::abs(T) / dt - 1e-9));
  const double h = T / static_cast<double>(steps);
  traj.dt = h;
  traj.points.reserve(static_cast<std::size_t>(steps) + 1);

  State s{x0.q, x0.p};
  const bool mechanical = spec.family() == Family::kMechanical;
  for (long k = 0; k < steps; ++k) {
    if (mechanical) {
      composed_verlet_step(spec, s, h);
    } else {
      rk4_step(spec, s, h);
    }
    for (int r = 0; r < d; ++r) {
      if (!(std::abs(s.p[r]) <= spec.p_max())) {
        throw Error(ErrorCode::kEscape, "momentum left the fiber window |p| <= " + std::to_string(spec.p_max()) +
                                            " at t=" + std::to_string((k + 1) * h));
      }
    }
    traj.points.push_back(make_phase_point(d, s.q, s.p));
  }
  return traj;
}

}  // namespace wkam
