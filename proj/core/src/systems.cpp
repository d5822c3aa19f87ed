#include <cmath>
#include <string>

#include "wkam/systems.hpp"

namespace wkam {

PhasePoint make_phase_point(int dim, const Vec& q, const Vec& p) {
  PhasePoint x;
  x.q[0] = wrap_unit(q[0]);
  x.p[0] = p[0];
  if (dim == 2) {
    x.q[1] = wrap_unit(q[1]);
    x.p[1] = p[1];
  }
  return x;
}

HamiltonianSpec HamiltonianSpec::mechanical(FourierSeries potential, double p_max) {
  HamiltonianSpec s;
  s.family_ = Family::kMechanical;
  s.dim_ = potential.dim();
  s.p_max_ = p_max;
  s.series_ = std::move(potential);
  s.validate();
  return s;
}

HamiltonianSpec HamiltonianSpec::adapted(FourierSeries generating, double p_max) {
  HamiltonianSpec s;
  s.family_ = Family::kAdapted;
  s.dim_ = generating.dim();
  s.p_max_ = p_max;
  s.series_ = std::move(generating);
  s.validate();
  return s;
}

HamiltonianSpec HamiltonianSpec::custom(int dim, Callable fn, double p_max) {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::kUnsupportedDimension, "Hamiltonian dimension must be 1 or 2");
  if (!fn) throw Error(ErrorCode::kInvalidArgument, "custom Hamiltonian needs a callable");
  HamiltonianSpec s;
  s.family_ = Family::kCustom;
  s.dim_ = dim;
  s.p_max_ = p_max;
  s.series_ = FourierSeries(dim, {});
  s.custom_ = std::move(fn);
  s.validate();
  return s;
}

HamiltonianEval HamiltonianSpec::evaluate(const Vec& q, const Vec& p) const {
  HamiltonianEval e;
  switch (family_) {
    case Family::kMechanical: {
      e.value = 0.5 * (p[0] * p[0] + p[1] * p[1]) + series_.value(q);
      e.dq = series_.gradient(q);
      e.dp = p;
      e.dpp = {Vec{1.0, 0.0}, Vec{0.0, dim_ == 2 ? 1.0 : 0.0}};
      break;
    }
    case Family::kAdapted: {
      const Vec du = series_.gradient(q);
      const Vec r{p[0] - du[0], p[1] - du[1]};
      const auto hu = series_.hessian(q);
      e.value = 0.5 * (r[0] * r[0] + r[1] * r[1]);
      e.dp = r;
      e.dq = {-(hu[0][0] * r[0] + hu[0][1] * r[1]), -(hu[1][0] * r[0] + hu[1][1] * r[1])};
      e.dpp = {Vec{1.0, 0.0}, Vec{0.0, dim_ == 2 ? 1.0 : 0.0}};
      break;
    }
    case Family::kCustom:
      e = custom_(q, p);
      if (dim_ == 1) {
        e.dq[1] = e.dp[1] = 0.0;
        e.dpp[0][1] = e.dpp[1][0] = e.dpp[1][1] = 0.0;
      }
      break;
  }
  return e;
}

void HamiltonianSpec::validate() const {
  if (!(p_max_ > 0.0) || !std::isfinite(p_max_)) {
    throw Error(ErrorCode::kInvalidArgument, "fiber window p_max must be positive");
  }
  // Sample q on an 8^d lattice and p on a ring of radii inside the window.
  const int nq = 8;
  const int nq2 = dim_ == 2 ? nq : 1;
  constexpr int kRadii = 5;
  constexpr int kDirs = 8;
  double max_slope_at_zero = 0.0;
  double min_growth_at_edge = 1e300;
  for (int a = 0; a < nq; ++a) {
    for (int b = 0; b < nq2; ++b) {
      const Vec q{a / double(nq), dim_ == 2 ? b / double(nq) : 0.0};
      const auto at0 = evaluate(q, Vec{0.0, 0.0});
      max_slope_at_zero = std::max({max_slope_at_zero, std::abs(at0.dp[0]), std::abs(at0.dp[1])});
      for (int r = 0; r <= kRadii; ++r) {
        const double rad = p_max_ * r / kRadii;
        const int dirs = dim_ == 2 ? kDirs : 2;
        for (int k = 0; k < dirs; ++k) {
          const double ang = 2.0 * 3.14159265358979323846 * k / dirs;
          const Vec p = dim_ == 2 ? Vec{rad * std::cos(ang), rad * std::sin(ang)} : Vec{k == 0 ? rad : -rad, 0.0};
          const auto e = evaluate(q, p);
          const bool pd = dim_ == 1 ? e.dpp[0][0] > 0.0
                                    : (e.dpp[0][0] > 0.0 && e.dpp[0][0] * e.dpp[1][1] - e.dpp[0][1] * e.dpp[1][0] > 0.0);
          if (!pd || !std::isfinite(e.value)) {
            throw Error(ErrorCode::kInvalidArgument, "fiber Hessian is not positive definite on the fiber window");
          }
          if (r == kRadii) min_growth_at_edge = std::min(min_growth_at_edge, (e.value - at0.value) / rad);
        }
      }
    }
  }
  if (!(min_growth_at_edge > max_slope_at_zero)) {
    throw Error(ErrorCode::kInvalidArgument, "Hamiltonian does not grow superlinearly on the fiber window");
  }
}

double eval_H(const HamiltonianSpec& spec, const PhasePoint& x) { return spec.value(x); }

namespace {

double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }

}  // namespace

LegendreResult legendre_transform(const HamiltonianSpec& spec, const Vec& q, const Vec& v) {
  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-10;
  const int d = spec.dim();
  Vec p = v;
  if (d == 1) p[1] = 0.0;
  auto objective = [&](const Vec& pp, const HamiltonianEval& e) { return dot(pp, v) - e.value; };

  HamiltonianEval e = spec.evaluate(q, p);
  for (int it = 0; it <= kMaxIter; ++it) {
    const Vec g{v[0] - e.dp[0], d == 2 ? v[1] - e.dp[1] : 0.0};
    if (std::max(std::abs(g[0]), std::abs(g[1])) <= kTol) {
      return {objective(p, e), p, it};
    }
    if (it == kMaxIter) break;
    Vec step{0.0, 0.0};
    if (d == 1) {
      step[0] = g[0] / e.dpp[0][0];
    } else {
      const double det = e.dpp[0][0] * e.dpp[1][1] - e.dpp[0][1] * e.dpp[1][0];
      step[0] = (e.dpp[1][1] * g[0] - e.dpp[0][1] * g[1]) / det;
      step[1] = (-e.dpp[1][0] * g[0] + e.dpp[0][0] * g[1]) / det;
    }
    const double f0 = objective(p, e);
    double alpha = 1.0;
    Vec trial{};
    HamiltonianEval et;
    for (int halving = 0; halving < 40; ++halving) {
      trial = {p[0] + alpha * step[0], p[1] + alpha * step[1]};
      et = spec.evaluate(q, trial);
      if (std::isfinite(et.value) && objective(trial, et) >= f0 - 1e-14 * (1.0 + std::abs(f0))) break;
      alpha *= 0.5;
    }
    p = trial;
    e = et;
  }
  throw Error(ErrorCode::kNoConvergence, "Legendre Newton iteration did not converge (non-Tonelli spec?)");
}

double legendre_lagrangian(const HamiltonianSpec& spec, const Vec& q, const Vec& v) {
  return legendre_transform(spec, q, v).value;
}

TangentPoint legendre_map(const HamiltonianSpec& spec, const PhasePoint& x) {
  const auto e = spec.evaluate(x.q, x.p);
  return {x.q, e.dp};
}

}  // namespace wkam
