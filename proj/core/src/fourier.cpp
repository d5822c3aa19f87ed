#include <cmath>
#include <numbers>
#include <string>

#include "wkam/systems.hpp"

namespace wkam {

double wrap_unit(double x) {
  double r = x - std::floor(x);
  // floor can round r up to exactly 1.0 for tiny negative x
  return r >= 1.0 ? 0.0 : r;
}

double wrap_centered(double x) {
  return x - std::floor(x + 0.5);
}

TorusGrid::TorusGrid(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorCode::kUnsupportedDimension, "torus dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (n < 8) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least 8 points per axis, got " + std::to_string(n));
  }
  size_ = dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
}

std::array<int, 2> TorusGrid::coords(std::size_t index) const {
  if (dim_ == 1) return {static_cast<int>(index), 0};
  return {static_cast<int>(index % n_), static_cast<int>(index / n_)};
}

std::size_t TorusGrid::index(std::array<int, 2> ij) const {
  auto wrap = [this](int i) { return static_cast<std::size_t>(((i % n_) + n_) % n_); };
  if (dim_ == 1) return wrap(ij[0]);
  return wrap(ij[0]) + wrap(ij[1]) * static_cast<std::size_t>(n_);
}

Vec TorusGrid::node(std::size_t index) const {
  const auto ij = coords(index);
  const double h = spacing();
  return {ij[0] * h, dim_ == 2 ? ij[1] * h : 0.0};
}

std::size_t TorusGrid::shifted(std::size_t idx, int axis, int step) const {
  auto ij = coords(idx);
  ij[axis] += step;
  return index(ij);
}

GridField::GridField(TorusGrid grid, double fill) : grid_(grid), values_(grid.size(), fill) {
  if (!std::isfinite(fill)) throw Error(ErrorCode::kInvalidArgument, "grid field values must be finite");
}

GridField::GridField(TorusGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "grid field has " + std::to_string(values_.size()) +
                                                 " values, grid has " + std::to_string(grid_.size()) + " nodes");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "grid field values must be finite");
  }
}

void GridField::set(std::size_t i, double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::kInvalidArgument, "grid field values must be finite");
  values_.at(i) = value;
}

GridField GridField::rebased(std::size_t base) const {
  std::vector<double> out(values_);
  const double shift = values_.at(base);
  for (double& v : out) v -= shift;
  return GridField(grid_, std::move(out));
}

double GridField::max_abs_difference(const GridField& other) const {
  if (!(grid_ == other.grid_)) throw Error(ErrorCode::kInvalidArgument, "grid mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) worst = std::max(worst, std::abs(values_[i] - other.values_[i]));
  return worst;
}

FourierSeries::FourierSeries(int dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::kUnsupportedDimension, "Fourier series dimension must be 1 or 2");
  for (const auto& t : terms_) {
    if (dim == 1 && t.k[1] != 0) {
      throw Error(ErrorCode::kInvalidArgument, "one-dimensional series cannot carry a second wave number");
    }
    if (!std::isfinite(t.cos_coeff) || !std::isfinite(t.sin_coeff)) {
      throw Error(ErrorCode::kInvalidArgument, "Fourier coefficients must be finite");
    }
  }
}

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase(const FourierSeries::Term& t, const Vec& q) {
  return kTwoPi * (t.k[0] * q[0] + t.k[1] * q[1]);
}
}  // namespace

double FourierSeries::value(const Vec& q) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    const double th = phase(t, q);
    s += t.cos_coeff * std::cos(th) + t.sin_coeff * std::sin(th);
  }
  return s;
}

Vec FourierSeries::gradient(const Vec& q) const {
  Vec g{0.0, 0.0};
  for (const auto& t : terms_) {
    const double th = phase(t, q);
    const double d = -t.cos_coeff * std::sin(th) + t.sin_coeff * std::cos(th);
    g[0] += kTwoPi * t.k[0] * d;
    g[1] += kTwoPi * t.k[1] * d;
  }
  return g;
}

std::array<Vec, 2> FourierSeries::hessian(const Vec& q) const {
  std::array<Vec, 2> h{Vec{0.0, 0.0}, Vec{0.0, 0.0}};
  for (const auto& t : terms_) {
    const double th = phase(t, q);
    const double d2 = -(t.cos_coeff * std::cos(th) + t.sin_coeff * std::sin(th)) * kTwoPi * kTwoPi;
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) h[r][s] += d2 * t.k[r] * t.k[s];
  }
  return h;
}

GridField FourierSeries::sample(const TorusGrid& grid) const {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = value(grid.node(i));
  return GridField(grid, std::move(v));
}

}  // namespace wkam
