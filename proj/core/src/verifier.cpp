#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "wkam/verifier.hpp"

namespace wkam {

namespace {

double phase_distance(int dim, const PhasePoint& a, const PhasePoint& b) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double dq = wrap_centered(a.q[i] - b.q[i]);
    const double dp = a.p[i] - b.p[i];
    s += dq * dq + dp * dp;
  }
  return std::sqrt(s);
}

PhasePoint curve_point(const CurvePoint& c) { return make_phase_point(1, {c.q, 0.0}, {c.p, 0.0}); }

// Distance from (q, p) to the periodic polyline through graph points sorted by q.
double graph_polyline_distance(const std::vector<CurvePoint>& g, double q, double p) {
  double best = 1e300;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto& a = g[k];
    const auto& b = g[(k + 1) % g.size()];
    const double dq = wrap_centered(b.q - a.q);
    const double dp = b.p - a.p;
    const double x = wrap_centered(q - (a.q + 0.5 * dq)) + 0.5 * dq;
    const double y = p - a.p;
    const double len2 = dq * dq + dp * dp;
    const double lam = len2 > 0.0 ? std::clamp((x * dq + y * dp) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, std::hypot(x - lam * dq, y - lam * dp));
  }
  return best;
}

// Largest second difference times n^2 over nodes whose stencil is kink free.
double lipschitz_estimate(const GridField& phi, const std::vector<std::uint8_t>& differentiable) {
  const TorusGrid& g = phi.grid();
  const double n = g.n();
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto l = g.shifted(i, 0, -1);
    const auto r = g.shifted(i, 0, 1);
    if (!differentiable[i] || !differentiable[l] || !differentiable[r]) continue;
    best = std::max(best, std::abs(phi[r] - 2.0 * phi[i] + phi[l]) * n * n);
  }
  return best;
}

std::vector<std::size_t> spread_indices(std::size_t count, std::size_t wanted) {
  const std::size_t m = std::min(count, wanted);
  std::vector<std::size_t> idx(m);
  for (std::size_t j = 0; j < m; ++j) idx[j] = j * count / m;
  return idx;
}

// Periodic multilinear interpolation of a vector field sampled on grid nodes.
Vec interpolate(const TorusGrid& g, const std::vector<Vec>& f, const Vec& q) {
  const int n = g.n();
  if (g.dim() == 1) {
    const double x = wrap_unit(q[0]) * n;
    const int i = static_cast<int>(std::floor(x));
    const double w = x - i;
    const auto a = g.index({i, 0});
    const auto b = g.index({i + 1, 0});
    return {(1 - w) * f[a][0] + w * f[b][0], 0.0};
  }
  const double x = wrap_unit(q[0]) * n;
  const double y = wrap_unit(q[1]) * n;
  const int i = static_cast<int>(std::floor(x));
  const int j = static_cast<int>(std::floor(y));
  const double wx = x - i;
  const double wy = y - j;
  Vec out{0.0, 0.0};
  for (int c = 0; c < 2; ++c) {
    out[c] = (1 - wx) * (1 - wy) * f[g.index({i, j})][c] + wx * (1 - wy) * f[g.index({i + 1, j})][c] +
             (1 - wx) * wy * f[g.index({i, j + 1})][c] + wx * wy * f[g.index({i + 1, j + 1})][c];
  }
  return out;
}

std::size_t snap(const TorusGrid& g, const Vec& q) {
  const int n = g.n();
  return g.index({static_cast<int>(std::lround(wrap_unit(q[0]) * n)),
                  g.dim() == 2 ? static_cast<int>(std::lround(wrap_unit(q[1]) * n)) : 0});
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

struct Nonwandering {
  bool pass = true;
  std::size_t recurrent = 0;
  std::size_t violators = 0;
  double worst_distance = 0.0;
  std::size_t witness = 0;
};

Nonwandering nonwandering_samples(const HamiltonianSpec& spec, const std::vector<PhasePoint>& samples,
                                  const std::vector<PhasePoint>& lift, double T, double tol, double recur_tol,
                                  double dt) {
  constexpr double kMinReturn = 1.0;
  const int dim = spec.dim();
  Nonwandering out;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto traj = flow_integrate(spec, samples[s], T, dt);
    bool recurrent = false;
    for (std::size_t j = 0; j < traj.points.size() && !recurrent; ++j) {
      if (static_cast<double>(j) * std::abs(traj.dt) < kMinReturn) continue;
      recurrent = phase_distance(dim, traj.points[j], samples[s]) <= recur_tol;
    }
    if (!recurrent) continue;
    ++out.recurrent;
    double d = 1e300;
    for (const auto& l : lift) d = std::min(d, phase_distance(dim, samples[s], l));
    if (d > out.worst_distance) {
      out.worst_distance = d;
      out.witness = s;
    }
    if (d > tol) ++out.violators;
  }
  out.pass = out.violators == 0;
  return out;
}

class Pipeline {
 public:
  explicit Pipeline(VerifierReport& r) : r_(r) {}

  // Runs a stage body; an exception becomes a failed stage.
  bool run(const std::string& name, const std::function<StageRecord()>& body) {
    StageRecord rec;
    try {
      rec = body();
    } catch (const std::exception& e) {
      rec.pass = false;
      rec.margin = 0.0;
      rec.details = std::string("error: ") + e.what();
    }
    rec.name = name;
    if (!std::isfinite(rec.margin)) rec.margin = rec.margin > 0 ? 1e300 : -1e300;
    r_.stages.push_back(rec);
    if (!rec.pass && first_failure_.empty()) first_failure_ = name;
    return rec.pass;
  }

  bool all_passed() const { return first_failure_.empty(); }
  const std::string& first_failure() const { return first_failure_; }

 private:
  VerifierReport& r_;
  std::string first_failure_;
};

// Shared state of the analytic stages for either input form.
struct Analytic {
  const HamiltonianSpec& spec;
  const VerifierConfig& cfg;
  GridField phi;
  // Momentum assigned to each node: matched branch or du.
  std::vector<Vec> momentum;
  std::vector<std::uint8_t> differentiable;
  std::optional<ActionKernel> kernel;
  std::optional<BarrierResult> barrier;
  double k = 0.0;
  double c = 0.0;
};

void run_analytic(Pipeline& pipe, Analytic& a, VerifierReport& report) {
  const TorusGrid& grid = a.phi.grid();
  const double n = grid.n();
  const VerifierConfig& cfg = a.cfg;
  const int dim = grid.dim();

  const bool have_c = pipe.run("critical_value", [&] {
    a.kernel = assemble_kernel(a.spec, grid, cfg.kernel, cfg.exec);
    CrossCheckOptions cc;
    const auto cv = critical_value(*a.kernel, a.spec, cc);
    a.c = cv.c;
    report.c_value = cv.c;
    StageRecord s;
    s.pass = true;
    s.margin = cv.crosscheck_upper - (cv.c - 10.0 * cc.tol);
    s.details = "c=" + fmt(cv.c) + " lambda=" + fmt(cv.lambda) + " infmax_upper=" + fmt(cv.crosscheck_upper);
    return s;
  });
  if (!have_c) return;

  pipe.run("k_equals_c", [&] {
    const auto kc = k_equals_c_check(a.k, a.c, cfg.c_tol);
    return StageRecord{"", kc.pass, cfg.c_tol - std::abs(a.k - a.c), kc.diagnostic};
  });

  pipe.run("domination", [&] {
    const std::vector<ActionKernel> horizons{*a.kernel};
    const auto d = domination_check(a.phi, a.c, a.spec, horizons, cfg.domination);
    return StageRecord{"", d.pass, d.worst_margin + cfg.domination.tol,
                       "curve_margin=" + fmt(d.curve_margin) + " derivative_margin=" + fmt(d.derivative_margin) +
                           " kinks=" + std::to_string(d.kink_nodes)};
  });

  pipe.run("barrier", [&] {
    a.barrier = peierls_barrier(*a.kernel, a.c, cfg.barrier);
    const auto pr = barrier_bound_check(a.phi, *a.barrier, 2.0 * cfg.barrier.tol);
    constexpr double kDiagFloor = -5e-3;
    StageRecord s;
    s.pass = pr.pass && a.barrier->diag_min >= kDiagFloor;
    s.margin = std::min(pr.worst_margin + 2.0 * cfg.barrier.tol, a.barrier->diag_min - kDiagFloor);
    s.details = "diag_min=" + fmt(a.barrier->diag_min) + " pair_margin=" + fmt(pr.worst_margin) +
                " aubry_nodes=" + std::to_string(a.barrier->aubry.nodes.size()) +
                (a.barrier->aubry.widened ? " (widened)" : "");
    return s;
  });
  if (!a.barrier) return;
  const AubrySet& aubry = a.barrier->aubry;

  if (dim == 1) {
    pipe.run("aubry_extremality", [&] {
      const double thr = 10.0 / n;
      double worst = 0.0;
      double worst_level = 0.0;
      std::size_t witness = 0;
      for (std::size_t i : aubry.nodes) {
        const double p = a.momentum[i][0];
        double dist = 0.0;
        if (!a.differentiable[i]) {
          const Interval iv = limiting_differentials(a.phi, i);
          dist = std::min(std::abs(p - iv.lo), std::abs(p - iv.hi));
        }
        const double level = std::abs(a.spec.evaluate(grid.node(i), {p, 0.0}).value - a.c);
        if (dist > worst) {
          worst = dist;
          witness = i;
        }
        worst_level = std::max(worst_level, level);
      }
      StageRecord s;
      s.margin = std::min(thr - worst, cfg.c_tol - worst_level);
      s.pass = s.margin >= 0.0;
      s.details = "endpoint_gap=" + fmt(worst) + " level_gap=" + fmt(worst_level) + " witness=" + std::to_string(witness);
      return s;
    });
  }

  const double lift_tol = cfg.lift_tol > 0.0 ? cfg.lift_tol : 4.0 / n;
  std::vector<PhasePoint> lift;
  for (std::size_t i : aubry.nodes) lift.push_back(make_phase_point(dim, grid.node(i), a.momentum[i]));

  pipe.run("nonwandering_aubry", [&] {
    std::vector<PhasePoint> samples;
    for (std::size_t i : spread_indices(grid.size(), cfg.nonwandering_points)) {
      samples.push_back(make_phase_point(dim, grid.node(i), a.momentum[i]));
    }
    const auto nw = nonwandering_samples(a.spec, samples, lift, cfg.nonwandering_T, lift_tol, cfg.recur_tol,
                                         cfg.limit_dt);
    return StageRecord{"", nw.pass, lift_tol - nw.worst_distance,
                       "recurrent=" + std::to_string(nw.recurrent) + " violators=" + std::to_string(nw.violators)};
  });

  pipe.run("barrier_inequalities", [&] {
    const double tol = cfg.prop_tol > 0.0 ? cfg.prop_tol : 2.0 / n;
    double worst = 1e300;
    std::size_t witness = 0;
    std::size_t checked = 0;
    std::size_t failed = 0;
    const std::size_t count = grid.size();
    const std::size_t want = std::min(cfg.prop_nodes, count);
    for (std::size_t j = 0; j < want; ++j) {
      std::size_t i = j * count / want;
      std::size_t tries = 0;
      while (!a.differentiable[i] && tries < count / want) {
        i = (i + 1) % count;
        ++tries;
      }
      if (!a.differentiable[i]) continue;
      const PhasePoint x0 = make_phase_point(dim, grid.node(i), a.momentum[i]);
      const auto omega = omega_limit_points(a.spec, x0, cfg.limit_T, cfg.recur_tol, cfg.limit_dt);
      const auto alpha = omega_limit_points(a.spec, x0, -cfg.limit_T, cfg.recur_tol, cfg.limit_dt);
      const std::size_t q1 = snap(grid, omega.front().center.q);
      const std::size_t q2 = snap(grid, alpha.front().center.q);
      const auto bi = barrier_inequality_check(a.phi, *a.barrier, i, q1, q2, tol);
      ++checked;
      if (!bi.pass) ++failed;
      const double m = std::min(bi.omega_margin, bi.alpha_margin) + tol;
      if (m < worst) {
        worst = m;
        witness = i;
      }
    }
    StageRecord s;
    s.pass = checked > 0 && failed == 0;
    s.margin = checked > 0 ? worst : -1.0;
    s.details = "nodes=" + std::to_string(checked) + " failed=" + std::to_string(failed) +
                " witness=" + std::to_string(witness);
    return s;
  });
}

Verdict classify(const Pipeline& pipe, bool injective) {
  if (pipe.all_passed()) return Verdict::kGraph;
  if (pipe.first_failure() == "exactness") return Verdict::kNotExact;
  if (pipe.first_failure() == "level_set" || pipe.first_failure() == "invariance") return Verdict::kNotInvariant;
  if (pipe.first_failure() == "injectivity" && !injective) return Verdict::kNotGraph;
  return Verdict::kInconclusive;
}

}  // namespace

LevelSetResult level_set_check(const HamiltonianSpec& spec, const LagrangianCurve& curve, double tol) {
  std::vector<double> h(curve.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    h[k] = eval_H(spec, curve_point(curve[k]));
    sum += h[k];
  }
  LevelSetResult r;
  r.k = sum / static_cast<double>(curve.size());
  for (double v : h) r.max_deviation = std::max(r.max_deviation, std::abs(v - r.k));
  r.pass = r.max_deviation <= tol;
  return r;
}

InvarianceResult invariance_check(const HamiltonianSpec& spec, const LagrangianCurve& curve, double T, double tol,
                                  double dt, std::size_t points) {
  constexpr std::size_t kStride = 10;
  InvarianceResult r;
  for (std::size_t k : spread_indices(curve.size(), points)) {
    const auto traj = flow_integrate(spec, curve_point(curve[k]), T, dt);
    for (std::size_t j = 0; j < traj.points.size(); j += kStride) {
      const auto& x = traj.points[j];
      const double d = curve.distance(x.q[0], x.p[0]);
      if (d > r.max_distance) {
        r.max_distance = d;
        r.witness_sample = k;
      }
    }
    const auto& last = traj.points.back();
    const double d = curve.distance(last.q[0], last.p[0]);
    if (d > r.max_distance) {
      r.max_distance = d;
      r.witness_sample = k;
    }
    ++r.points_flowed;
  }
  r.pass = r.max_distance <= tol;
  return r;
}

KEqualsC k_equals_c_check(double k, double c, double tol) {
  KEqualsC r;
  r.k_le_c = k <= c + tol;
  r.pass = std::abs(k - c) <= tol;
  std::ostringstream d;
  d << "k=" << k << " c=" << c;
  if (!r.k_le_c) {
    d << "; k>c: numerical resolution fault, an invariant exact curve always has k<=c";
  } else if (!r.pass) {
    d << "; k<c: an invariant exact curve isotopic to the zero section must lie in {H=c}";
  }
  r.diagnostic = d.str();
  return r;
}

std::vector<LimitCluster> omega_limit_points(const HamiltonianSpec& spec, const PhasePoint& x0, double T,
                                             double recur_tol, double dt) {
  constexpr std::size_t kTailPoints = 2000;
  const auto traj = flow_integrate(spec, x0, T, dt);
  const std::size_t total = traj.points.size();
  const std::size_t first = total - std::max<std::size_t>(1, total / 5);
  const std::size_t stride = std::max<std::size_t>(1, (total - first) / kTailPoints);
  const int dim = spec.dim();
  std::vector<LimitCluster> clusters;
  for (std::size_t j = first; j < total; j += stride) {
    const auto& x = traj.points[j];
    bool placed = false;
    for (auto& c : clusters) {
      if (phase_distance(dim, c.center, x) <= recur_tol) {
        ++c.count;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({x, 1});
  }
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const LimitCluster& a, const LimitCluster& b) { return a.count > b.count; });
  return clusters;
}

ActionIdentity action_identity_check(const HamiltonianSpec& spec, const Trajectory& trajectory, double c,
                                     double tol) {
  ActionIdentity r;
  const auto& pts = trajectory.points;
  if (pts.size() < 2) {
    r.pass = true;
    return r;
  }
  const int dim = spec.dim();
  std::vector<double> f(pts.size());
  std::vector<double> g(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const Vec v = spec.evaluate(pts[j].q, pts[j].p).dp;
    double pv = 0.0;
    for (int i = 0; i < dim; ++i) pv += pts[j].p[i] * v[i];
    f[j] = pv;
    g[j] = legendre_lagrangian(spec, pts[j].q, v) + c;
  }
  const double h = std::abs(trajectory.dt);
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    r.lhs += 0.5 * h * (f[j] + f[j + 1]);
    r.rhs += 0.5 * h * (g[j] + g[j + 1]);
  }
  r.difference = std::abs(r.lhs - r.rhs);
  const double T = h * static_cast<double>(pts.size() - 1);
  r.pass = r.difference <= tol * (1.0 + T);
  return r;
}

BarrierInequality barrier_inequality_check(const GridField& phi, const BarrierResult& b, std::size_t q,
                                           std::size_t q1, std::size_t q2, double tol) {
  if (!(phi.grid() == b.grid)) throw Error(ErrorCode::kInvalidArgument, "field and barrier grids differ");
  BarrierInequality r;
  r.omega_margin = phi[q1] - phi[q] - b(q, q1);
  r.alpha_margin = phi[q] - phi[q2] - b(q2, q);
  r.omega_pass = r.omega_margin >= -tol;
  r.alpha_pass = r.alpha_margin >= -tol;
  r.pass = r.omega_pass && r.alpha_pass;
  return r;
}

NonwanderingResult nonwandering_aubry_check(const HamiltonianSpec& spec, const LagrangianCurve& curve,
                                            const std::vector<PhasePoint>& aubry_lift, double T, double tol,
                                            double recur_tol, double dt, std::size_t points) {
  std::vector<PhasePoint> samples;
  const auto idx = spread_indices(curve.size(), points);
  for (std::size_t k : idx) samples.push_back(curve_point(curve[k]));
  const auto nw = nonwandering_samples(spec, samples, aubry_lift, T, tol, recur_tol, dt);
  return {nw.pass, nw.recurrent, nw.violators, nw.worst_distance, idx.empty() ? 0 : idx[nw.witness]};
}

VerifierReport verify_birkhoff(const HamiltonianSpec& spec, const LagrangianCurve& curve, VerifierConfig cfg) {
  VerifierReport report;
  Pipeline pipe(report);
  const double n = cfg.n;

  const bool exact = pipe.run("exactness", [&] {
    const double integral = exactness_check(curve);
    return StageRecord{"", std::abs(integral) <= cfg.exact_tol, cfg.exact_tol - std::abs(integral),
                       "liouville_integral=" + fmt(integral)};
  });
  if (!exact) {
    report.verdict = Verdict::kNotExact;
    return report;
  }

  LevelSetResult level;
  const bool on_level = pipe.run("level_set", [&] {
    if (spec.dim() != 1) throw Error(ErrorCode::kUnsupportedDimension, "curve input requires d = 1");
    level = level_set_check(spec, curve, cfg.level_tol);
    return StageRecord{"", level.pass, cfg.level_tol - level.max_deviation,
                       "k=" + fmt(level.k) + " max_deviation=" + fmt(level.max_deviation)};
  });
  report.k_level = level.k;
  const bool invariant = on_level && pipe.run("invariance", [&] {
    const auto inv = invariance_check(spec, curve, cfg.invariance_T, cfg.invariance_tol, cfg.flow_dt,
                                      cfg.invariance_points);
    return StageRecord{"", inv.pass, cfg.invariance_tol - inv.max_distance,
                       "max_distance=" + fmt(inv.max_distance) + " witness_sample=" +
                           std::to_string(inv.witness_sample)};
  });
  if (!invariant) {
    report.verdict = Verdict::kNotInvariant;
    return report;
  }

  const TorusGrid grid(1, cfg.n);
  std::optional<BranchTable> table;
  std::optional<GridField> phi;
  const bool selected = pipe.run("selector", [&] {
    double offset = 0.0;
    try {
      table = branch_decompose(curve, grid, offset);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kFoldOnNode) throw;
      offset = 1e-6 / n;
      table = branch_decompose(curve, grid, offset);
    }
    phi = selector(*table);
    const auto ax = selector_axiom_check(*phi, *table, curve, cfg.selector);
    const double dist_tol = cfg.selector.dist_tol > 0.0 ? cfg.selector.dist_tol : 2.0 / n;
    return StageRecord{"", ax.pass, dist_tol - ax.max_curve_distance,
                       "exceptional=" + std::to_string(ax.exceptional_nodes) + " folds=" +
                           std::to_string(table->fold_count) + " max_curve_distance=" + fmt(ax.max_curve_distance) +
                           " max_value_gap=" + fmt(ax.max_value_gap)};
  });

  std::vector<std::uint8_t> differentiable;
  std::vector<double> dphi;
  if (selected) {
    const auto grad = discrete_gradient(*phi, cfg.domination.kink_threshold);
    differentiable = grad.differentiable;
    Analytic a{spec, cfg, *phi, {}, differentiable, {}, {}, level.k, 0.0};
    a.momentum.resize(grid.size());
    dphi.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      dphi[i] = grad.du[i][0];
      const auto& fiber = table->branches[i];
      double best = fiber.front().p;
      for (const auto& b : fiber) {
        if (std::abs(b.p - dphi[i]) < std::abs(best - dphi[i])) best = b.p;
      }
      a.momentum[i] = {best, 0.0};
    }
    run_analytic(pipe, a, report);

    pipe.run("c11_refinement", [&] {
      const TorusGrid fine = grid.refined();
      const auto table2 = branch_decompose(curve, fine, table->offset);
      const auto phi2 = selector(table2);
      const auto grad2 = discrete_gradient(phi2, cfg.domination.kink_threshold);
      double agree = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!differentiable[i] || !grad2.differentiable[2 * i]) continue;
        agree = std::max(agree, std::abs(dphi[i] - grad2.du[2 * i][0]));
      }
      const double l1 = lipschitz_estimate(*phi, differentiable);
      const double l2 = lipschitz_estimate(phi2, grad2.differentiable);
      constexpr double kFlat = 1e-6;
      const double hi = std::max(l1, l2);
      const double lo = std::min(l1, l2);
      const bool stable = hi <= kFlat || hi <= 2.0 * lo;
      StageRecord s;
      s.margin = 20.0 / n - agree;
      s.pass = s.margin >= 0.0 && stable;
      s.details = "dphi_gap=" + fmt(agree) + " lipschitz_n=" + fmt(l1) + " lipschitz_2n=" + fmt(l2);
      return s;
    });

    pipe.run("hausdorff", [&] {
      std::vector<CurvePoint> g;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (differentiable[i]) g.push_back({grid.node(i)[0] + table->offset, dphi[i]});
      }
      if (g.empty()) throw Error(ErrorCode::kInvalidArgument, "no differentiable node");
      double d1 = 0.0;
      for (const auto& x : g) d1 = std::max(d1, curve.distance(x.q, x.p));
      double d2 = 0.0;
      for (const auto& x : curve.samples()) d2 = std::max(d2, graph_polyline_distance(g, x.q, x.p));
      report.hausdorff_graph_vs_curve = std::max(d1, d2);
      const double tol = cfg.graph_tol > 0.0 ? cfg.graph_tol : 2.0 / n;
      return StageRecord{"", report.hausdorff_graph_vs_curve <= tol, tol - report.hausdorff_graph_vs_curve,
                         "graph_to_curve=" + fmt(d1) + " curve_to_graph=" + fmt(d2)};
    });
  }

  bool injective = false;
  pipe.run("injectivity", [&] {
    const auto folds = curve.fold_count();
    const long w = curve.winding();
    injective = folds == 0 && std::abs(w) == 1;
    return StageRecord{"", injective, injective ? 0.0 : -static_cast<double>(std::max<std::size_t>(folds, 1)),
                       "folds=" + std::to_string(folds) + " winding=" + std::to_string(w)};
  });
  report.verdict = classify(pipe, injective);
  return report;
}

VerifierReport verify_graph_field(const HamiltonianSpec& spec, const GridField& u, VerifierConfig cfg,
                                  std::optional<std::vector<Vec>> du) {
  VerifierReport report;
  Pipeline pipe(report);
  const TorusGrid& grid = u.grid();
  const int dim = grid.dim();
  if (spec.dim() != dim) throw Error(ErrorCode::kInvalidArgument, "field and Hamiltonian dimensions differ");
  auto grad = discrete_gradient(u, cfg.domination.kink_threshold);
  if (du) {
    if (du->size() != grid.size()) throw Error(ErrorCode::kInvalidArgument, "differential size does not match grid");
    grad.du = std::move(*du);
  }

  double k = 0.0;
  const bool on_level = pipe.run("level_set", [&] {
    std::vector<double> h(grid.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      h[i] = spec.evaluate(grid.node(i), grad.du[i]).value;
      sum += h[i];
    }
    k = sum / static_cast<double>(h.size());
    double dev = 0.0;
    for (double v : h) dev = std::max(dev, std::abs(v - k));
    return StageRecord{"", dev <= cfg.level_tol, cfg.level_tol - dev, "k=" + fmt(k) + " max_deviation=" + fmt(dev)};
  });
  report.k_level = k;
  const bool invariant = on_level && pipe.run("invariance", [&] {
    constexpr std::size_t kStride = 10;
    double worst = 0.0;
    std::size_t witness = 0;
    for (std::size_t i : spread_indices(grid.size(), cfg.invariance_points)) {
      const auto traj = flow_integrate(spec, make_phase_point(dim, grid.node(i), grad.du[i]), cfg.invariance_T,
                                       cfg.flow_dt);
      for (std::size_t j = 0; j < traj.points.size(); j += kStride) {
        const auto& x = traj.points[j];
        const Vec p = interpolate(grid, grad.du, x.q);
        const double d = std::hypot(x.p[0] - p[0], x.p[1] - p[1]);
        if (d > worst) {
          worst = d;
          witness = i;
        }
      }
    }
    return StageRecord{"", worst <= cfg.invariance_tol, cfg.invariance_tol - worst,
                       "max_distance=" + fmt(worst) + " witness_node=" + std::to_string(witness)};
  });
  if (!invariant) {
    report.verdict = Verdict::kNotInvariant;
    return report;
  }

  Analytic a{spec, cfg, u, grad.du, grad.differentiable, {}, {}, k, 0.0};
  run_analytic(pipe, a, report);
  pipe.run("injectivity", [&] { return StageRecord{"", true, 0.0, "graph-form input"}; });
  report.verdict = classify(pipe, true);
  return report;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kGraph: return "GRAPH";
    case Verdict::kNotGraph: return "NOT_GRAPH";
    case Verdict::kNotInvariant: return "NOT_INVARIANT";
    case Verdict::kNotExact: return "NOT_EXACT";
    case Verdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

Verdict verdict_from_string(std::string_view s) {
  for (Verdict v : {Verdict::kGraph, Verdict::kNotGraph, Verdict::kNotInvariant, Verdict::kNotExact,
                    Verdict::kInconclusive}) {
    if (to_string(v) == s) return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown verdict '" + std::string(s) + "'");
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kGraph: return 0;
    case Verdict::kInconclusive: return 3;
    default: return 2;
  }
}

const StageRecord* VerifierReport::stage(std::string_view name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

}  // namespace wkam
