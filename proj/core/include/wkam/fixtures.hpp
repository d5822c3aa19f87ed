#pragma once

// Built-in Hamiltonians and curves with closed-form behaviour. Used by the
// tests, the acceptance suite and the CLI's named fixtures.

#include <cstddef>
#include <functional>

#include "wkam/selector.hpp"
#include "wkam/systems.hpp"

namespace wkam::fixtures {

/// H = |p|^2 / 2.
HamiltonianSpec free_hamiltonian(int dim = 1);

/// H = p^2 / 2 + cos(2 pi q); c = max V = 1, Aubry set {q = 0}.
HamiltonianSpec pendulum();

/// Generating function of the default ADAPTED fixture:
/// u(q) = 0.05 sin(2 pi q) + 0.01 cos(4 pi q).
FourierSeries adapted_potential();
/// Two-dimensional variant: u = 0.02 sin(2 pi x) + 0.015 cos(2 pi (x + y)) + 0.01 sin(2 pi y).
FourierSeries adapted_potential_2d();

HamiltonianSpec adapted(int dim = 1);

/// p == 0.
LagrangianCurve zero_section(std::size_t samples = 512);
/// p == p0 (a non-exact circle unless p0 == 0).
LagrangianCurve constant_circle(double p0, std::size_t samples = 512);
/// Graph {(q, slope(q))} sampled at q = k / samples.
LagrangianCurve graph_curve(const std::function<double(double)>& slope, std::size_t samples = 512);
/// Graph of du for a one-dimensional series u.
LagrangianCurve graph_of_differential(const FourierSeries& u, std::size_t samples = 512);

/// Exact curve with two folds over an interval around q ~ 0.25:
///   q(s) = s + 0.2 sin(4 pi s) b(s),  b(s) = exp(4 (cos(2 pi (s - 1/4)) - 1)),
///   p(s) = 0.5 cos(2 pi s) + 0.15 sin(2 pi s) + beta,
/// with beta chosen so that the trapezoidal Liouville integral at this
/// sampling vanishes.
LagrangianCurve fold_curve(std::size_t samples = 512);
/// beta of fold_curve(samples).
double fold_curve_offset(std::size_t samples);
/// Parametric point of the fold curve at s (given beta).
CurvePoint fold_curve_point(double s, double beta);

}  // namespace wkam::fixtures
