#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkam/selector.hpp"
#include "wkam/weakkam.hpp"

namespace wkam {

LagrangianCurve::LagrangianCurve(std::vector<CurvePoint> samples) : pts_(std::move(samples)) {
  for (auto& s : pts_) {
    if (!std::isfinite(s.q) || !std::isfinite(s.p)) throw Error(ErrorCode::kInvalidArgument, "curve samples must be finite");
    s.q = wrap_unit(s.q);
  }
  if (pts_.size() > 1) {
    const auto& a = pts_.front();
    const auto& b = pts_.back();
    if (std::abs(wrap_centered(a.q - b.q)) <= 1e-12 && std::abs(a.p - b.p) <= 1e-12) pts_.pop_back();
  }
  if (pts_.size() < kMinSamples) {
    throw Error(ErrorCode::kInvalidArgument, "curve needs at least 64 samples, got " + std::to_string(pts_.size()));
  }
  const double max_gap = 4.0 / static_cast<double>(pts_.size());
  for (std::size_t k = 0; k < pts_.size(); ++k) {
    const double gap = std::max(std::abs(dq(k)), std::abs(dp(k)));
    if (gap > max_gap) {
      std::ostringstream msg;
      msg << "gap " << gap << " between samples " << k << " and " << (k + 1) % pts_.size() << " exceeds 4/N";
      throw Error(k + 1 == pts_.size() ? ErrorCode::kNotClosed : ErrorCode::kInvalidArgument, msg.str());
    }
  }
}

double LagrangianCurve::dq(std::size_t k) const {
  return wrap_centered(pts_[(k + 1) % pts_.size()].q - pts_[k].q);
}

long LagrangianCurve::winding() const {
  double total = 0.0;
  for (std::size_t k = 0; k < pts_.size(); ++k) total += dq(k);
  return std::lround(total);
}

std::vector<std::size_t> LagrangianCurve::fold_samples() const {
  const std::size_t n = pts_.size();
  // Sign of each segment; zero-length segments inherit the previous sign.
  std::vector<int> sign(n, 0);
  int last = 0;
  for (std::size_t pass = 0; pass < 2; ++pass) {
    for (std::size_t k = 0; k < n; ++k) {
      const double d = dq(k);
      if (d > 0.0) last = 1;
      else if (d < 0.0) last = -1;
      sign[k] = last;
    }
  }
  std::vector<std::size_t> folds;
  for (std::size_t k = 0; k < n; ++k) {
    const int prev = sign[(k + n - 1) % n];
    if (prev != 0 && sign[k] != 0 && prev != sign[k]) folds.push_back(k);
  }
  return folds;
}

double LagrangianCurve::max_abs_p() const {
  double m = 0.0;
  for (const auto& s : pts_) m = std::max(m, std::abs(s.p));
  return m;
}

double LagrangianCurve::distance(double q, double p) const {
  double best = 1e300;
  for (std::size_t k = 0; k < pts_.size(); ++k) {
    const double q0 = pts_[k].q;
    const double dqk = dq(k);
    const double dpk = dp(k);
    const double x = wrap_centered(q - (q0 + 0.5 * dqk)) + 0.5 * dqk;  // q relative to q0
    const double y = p - pts_[k].p;
    const double len2 = dqk * dqk + dpk * dpk;
    double lam = len2 > 0.0 ? (x * dqk + y * dpk) / len2 : 0.0;
    lam = std::clamp(lam, 0.0, 1.0);
    best = std::min(best, std::hypot(x - lam * dqk, y - lam * dpk));
  }
  return best;
}

double exactness_check(const LagrangianCurve& curve) {
  double total = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    total += 0.5 * (curve[k].p + curve[(k + 1) % curve.size()].p) * curve.dq(k);
  }
  return total;
}

BranchTable branch_decompose(const LagrangianCurve& curve, const TorusGrid& grid, double offset) {
  if (grid.dim() != 1) {
    throw Error(ErrorCode::kUnsupportedDimension, "the function selector is realized for curves in T*T^1 only");
  }
  const int n = grid.n();
  const double h = grid.spacing();
  BranchTable table{grid, offset, std::vector<std::vector<Branch>>(grid.size()), curve.fold_count()};

  for (std::size_t k : curve.fold_samples()) {
    const double rel = (curve[k].q - offset) * n;
    if (std::abs(rel - std::round(rel)) * h <= 1e-9) {
      std::ostringstream msg;
      msg << "fold at sample " << k << " (q=" << curve[k].q << ") lies on a grid fiber";
      throw Error(ErrorCode::kFoldOnNode, msg.str());
    }
  }

  double s_value = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double q0 = curve[k].q;
    const double p0 = curve[k].p;
    const double dq = curve.dq(k);
    const double dp = curve.dp(k);
    if (dq != 0.0) {
      // Fibers y_m = m/n + offset with lambda = (y_m - q0)/dq in [0, 1).
      const double lo = std::min(q0, q0 + dq);
      const double hi = std::max(q0, q0 + dq);
      const auto m_lo = static_cast<long>(std::floor((lo - offset) * n)) - 1;
      const auto m_hi = static_cast<long>(std::ceil((hi - offset) * n)) + 1;
      for (long m = m_lo; m <= m_hi; ++m) {
        const double y = static_cast<double>(m) / n + offset;
        const double lam = (y - q0) / dq;
        if (!(lam >= 0.0 && lam < 1.0)) continue;
        const double p = p0 + lam * dp;
        const double s = s_value + lam * dq * (p0 + 0.5 * lam * dp);
        const auto node = static_cast<std::size_t>(((m % n) + n) % n);
        table.branches[node].push_back({p, s, k});
      }
    }
    s_value += 0.5 * (p0 + curve[(k + 1) % curve.size()].p) * dq;
  }
  for (auto& fiber : table.branches) {
    std::sort(fiber.begin(), fiber.end(), [](const Branch& a, const Branch& b) {
      return a.p < b.p || (a.p == b.p && a.segment < b.segment);
    });
  }
  return table;
}

GridField selector(const BranchTable& table) {
  std::vector<double> phi(table.grid.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const auto& fiber = table.branches[i];
    if (fiber.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "fiber " + std::to_string(i) + " is not crossed by the curve");
    }
    double best = fiber.front().s_value;
    for (const auto& b : fiber) best = std::min(best, b.s_value);
    phi[i] = best;
  }
  return GridField(table.grid, std::move(phi));
}

SelectorAxiomReport selector_axiom_check(const GridField& phi, const BranchTable& table, const LagrangianCurve& curve,
                                         SelectorAxiomOptions opts) {
  const TorusGrid& grid = table.grid;
  if (!(phi.grid() == grid)) throw Error(ErrorCode::kInvalidArgument, "selector field and branch table grids differ");
  const double n = grid.n();
  const double dist_tol = opts.dist_tol > 0.0 ? opts.dist_tol : 2.0 / n;

  SelectorAxiomReport r;
  const auto grad = discrete_gradient(phi, opts.kink_threshold);
  r.differentiable = grad.differentiable;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& fiber = table.branches[i];
    double crit_gap = 1e300;
    for (const auto& b : fiber) crit_gap = std::min(crit_gap, std::abs(phi[i] - b.s_value));
    r.max_critical_gap = std::max(r.max_critical_gap, crit_gap);
    if (crit_gap > opts.val_tol) ++r.critical_failures;

    if (!grad.differentiable[i]) {
      ++r.exceptional_nodes;
      continue;
    }
    ++r.differentiable_nodes;
    const double dphi = grad.du[i][0];
    const double q = grid.node(i)[0] + table.offset;
    const double dist = curve.distance(q, dphi);
    if (dist > r.max_curve_distance) {
      r.max_curve_distance = dist;
      r.witness = i;
    }
    if (dist > dist_tol) ++r.graph_failures;

    const Branch* matched = nullptr;
    for (const auto& b : fiber) {
      if (!matched || std::abs(b.p - dphi) < std::abs(matched->p - dphi)) matched = &b;
    }
    const double gap = matched ? std::abs(phi[i] - matched->s_value) : 1e300;
    r.max_value_gap = std::max(r.max_value_gap, gap);
    if (gap > opts.val_tol) ++r.value_failures;
  }
  r.exceptional_fraction = static_cast<double>(r.exceptional_nodes) / n;
  r.allowed_fraction = 2.0 * static_cast<double>(table.fold_count) / n;
  r.pass = r.graph_failures == 0 && r.value_failures == 0 && r.critical_failures == 0 &&
           r.exceptional_fraction <= r.allowed_fraction;
  return r;
}

Interval limiting_differentials(const GridField& phi, std::size_t node) {
  const TorusGrid& g = phi.grid();
  if (g.dim() != 1) throw Error(ErrorCode::kUnsupportedDimension, "limiting differentials are one-dimensional");
  const double n = g.n();
  const auto at = [&](long offset) { return phi[g.shifted(node, 0, static_cast<int>(offset))]; };
  Interval out{1e300, -1e300};
  auto take = [&](double v) {
    out.lo = std::min(out.lo, v);
    out.hi = std::max(out.hi, v);
  };
  for (long s : {1L, 2L, 4L, 8L}) {
    take((at(s) - at(0)) * n / static_cast<double>(s));
    take((at(0) - at(-s)) * n / static_cast<double>(s));
  }
  take((at(2) - at(1)) * n);
  take((at(-1) - at(-2)) * n);
  return out;
}

}  // namespace wkam
