#include <cmath>
#include <numbers>

#include "wkam/fixtures.hpp"

namespace wkam::fixtures {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFoldAmplitude = 0.2;
constexpr double kFoldSharpness = 4.0;
constexpr double kFoldMomentum = 0.5;
constexpr double kFoldSkew = 0.15;
}  // namespace

HamiltonianSpec free_hamiltonian(int dim) { return HamiltonianSpec::mechanical(FourierSeries(dim, {})); }

HamiltonianSpec pendulum() { return HamiltonianSpec::mechanical(FourierSeries(1, {{{1, 0}, 1.0, 0.0}})); }

FourierSeries adapted_potential() { return FourierSeries(1, {{{1, 0}, 0.0, 0.05}, {{2, 0}, 0.01, 0.0}}); }

FourierSeries adapted_potential_2d() {
  return FourierSeries(2, {{{1, 0}, 0.0, 0.02}, {{1, 1}, 0.015, 0.0}, {{0, 1}, 0.0, 0.01}});
}

HamiltonianSpec adapted(int dim) {
  return HamiltonianSpec::adapted(dim == 2 ? adapted_potential_2d() : adapted_potential());
}

LagrangianCurve zero_section(std::size_t samples) { return constant_circle(0.0, samples); }

LagrangianCurve constant_circle(double p0, std::size_t samples) {
  return graph_curve([p0](double) { return p0; }, samples);
}

LagrangianCurve graph_curve(const std::function<double(double)>& slope, std::size_t samples) {
  std::vector<CurvePoint> pts(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double q = static_cast<double>(k) / static_cast<double>(samples);
    pts[k] = {q, slope(q)};
  }
  return LagrangianCurve(std::move(pts));
}

LagrangianCurve graph_of_differential(const FourierSeries& u, std::size_t samples) {
  return graph_curve([&u](double q) { return u.gradient(Vec{q, 0.0})[0]; }, samples);
}

CurvePoint fold_curve_point(double s, double beta) {
  const double bump = std::exp(kFoldSharpness * (std::cos(kTwoPi * (s - 0.25)) - 1.0));
  return {s + kFoldAmplitude * std::sin(2.0 * kTwoPi * s) * bump,
          kFoldMomentum * std::cos(kTwoPi * s) + kFoldSkew * std::sin(kTwoPi * s) + beta};
}

double fold_curve_offset(std::size_t samples) {
  // The trapezoidal integral is affine in beta with slope equal to the
  // winding number (1).
  std::vector<CurvePoint> pts(samples);
  for (std::size_t k = 0; k < samples; ++k) pts[k] = fold_curve_point(static_cast<double>(k) / samples, 0.0);
  return -exactness_check(LagrangianCurve(std::move(pts)));
}

LagrangianCurve fold_curve(std::size_t samples) {
  const double beta = fold_curve_offset(samples);
  std::vector<CurvePoint> pts(samples);
  for (std::size_t k = 0; k < samples; ++k) pts[k] = fold_curve_point(static_cast<double>(k) / samples, beta);
  return LagrangianCurve(std::move(pts));
}

}  // namespace wkam::fixtures
