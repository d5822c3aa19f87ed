#pragma once

// Heavy objects shared across tests, computed once per process.

#include <cmath>
#include <numbers>

#include "wkam/fixtures.hpp"
#include "wkam/minplus.hpp"
#include "wkam/weakkam.hpp"

namespace wkam::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline const ActionKernel& pendulum_kernel() {
  static const ActionKernel k = assemble_kernel(fixtures::pendulum(), TorusGrid(1, 256), {0.5, 2, 8}, {4});
  return k;
}

inline const ActionKernel& free_kernel() {
  static const ActionKernel k = assemble_kernel(fixtures::free_hamiltonian(), TorusGrid(1, 256), {1.0, 2, 4}, {4});
  return k;
}

inline const ActionKernel& adapted_kernel() {
  static const ActionKernel k = assemble_kernel(fixtures::adapted(), TorusGrid(1, 256), {1.0, 2, 4}, {4});
  return k;
}

inline const WeakKamResult& pendulum_pair() {
  static const WeakKamResult r = [] {
    const auto& k = pendulum_kernel();
    const double c = critical_value(k, fixtures::pendulum()).c;
    WeakKamOptions o;
    o.exec.threads = 4;
    const auto minus = weak_kam_solve(k, c, LaxOleinik::kNegative, o);
    return conjugate_pair(minus.u, k, c, 1e-10, 100000, {4});
  }();
  return r;
}

inline BarrierOptions threaded_barrier_options() {
  BarrierOptions o;
  o.exec.threads = 4;
  return o;
}

inline const BarrierResult& pendulum_barrier() {
  static const BarrierResult b = peierls_barrier(pendulum_kernel(), pendulum_pair().c, threaded_barrier_options());
  return b;
}

inline const BarrierResult& free_barrier() {
  static const BarrierResult b = peierls_barrier(free_kernel(), 0.0, threaded_barrier_options());
  return b;
}

inline const BarrierResult& adapted_barrier() {
  static const BarrierResult b = [] {
    const double c = critical_value(adapted_kernel(), fixtures::adapted()).c;
    return peierls_barrier(adapted_kernel(), c, threaded_barrier_options());
  }();
  return b;
}

// Closed-form generating function of the ADAPTED fixture, written out
// independently of the FourierSeries code.
inline double adapted_u(double q) { return 0.05 * std::sin(kTwoPi * q) + 0.01 * std::cos(2.0 * kTwoPi * q); }
inline double adapted_du(double q) {
  return 0.05 * kTwoPi * std::cos(kTwoPi * q) - 0.02 * kTwoPi * std::sin(2.0 * kTwoPi * q);
}

}  // namespace wkam::testing
