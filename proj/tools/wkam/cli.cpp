#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "config.hpp"
#include "svg.hpp"
#include "wkam/fixtures.hpp"
#include "wkam/io.hpp"
#include "wkam/verifier.hpp"

namespace wkam::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config;
  std::string kernel_cache;
  unsigned threads = 1;
  bool plot = false;
  std::string out;
  long seed = 0;  // reserved
};

struct Context {
  RunConfig cfg;
  Globals g;
  fs::path out_dir;
  Exec exec;
  std::ostream& out;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return f;
}

ActionKernel obtain_kernel(const Context& c, const HamiltonianSpec& spec) {
  const std::string path = !c.g.kernel_cache.empty() ? c.g.kernel_cache : c.cfg.cache;
  if (!path.empty() && fs::exists(path)) {
    ActionKernel k = read_kernel_cache(path);
    const auto& p = c.cfg.kernel;
    if (!(k.grid() == c.cfg.grid()) || k.horizon() != p.t || k.winding() != p.winding || k.substeps() != p.substeps) {
      throw Error(ErrorCode::kInvalidArgument, "kernel cache " + path + " does not match the configuration");
    }
    return k;
  }
  return assemble_kernel(spec, c.cfg.grid(), c.cfg.kernel, c.exec);
}

LagrangianCurve load_curve(const RunConfig& cfg) {
  if (!cfg.curve_path.empty()) return read_curve_csv(fs::path(cfg.curve_path));
  const std::string& f = cfg.curve_fixture;
  if (f == "graph") return fixtures::graph_of_differential(fixtures::adapted_potential());
  if (f == "zero") return fixtures::zero_section();
  if (f == "fold") return fixtures::fold_curve();
  if (f.rfind("circle:", 0) == 0) return fixtures::constant_circle(std::stod(f.substr(7)));
  if (f == "circle") return fixtures::constant_circle(0.3);
  if (f.empty()) throw Error(ErrorCode::kInvalidArgument, "no curve: set [curve] path or fixture");
  throw Error(ErrorCode::kInvalidArgument, "unknown curve fixture '" + f + "'");
}

bool has_curve(const RunConfig& cfg) { return !cfg.curve_path.empty() || !cfg.curve_fixture.empty(); }

std::vector<double> axis_coords(const TorusGrid& g) {
  std::vector<double> x(static_cast<std::size_t>(g.n()));
  for (int i = 0; i < g.n(); ++i) x[i] = static_cast<double>(i) / g.n();
  return x;
}

// Values along the first axis (second coordinate 0).
std::vector<double> axis_slice(const GridField& u) {
  std::vector<double> y(static_cast<std::size_t>(u.grid().n()));
  for (int i = 0; i < u.grid().n(); ++i) y[i] = u[u.grid().index({i, 0})];
  return y;
}

int cmd_legendre(Context& c, double vmax, int samples) {
  const auto spec = c.cfg.hamiltonian();
  const TorusGrid grid = c.cfg.grid();
  auto f = open_out(c.out_dir / "legendre.csv");
  f << "q,v,L,p\n";
  const int stride = std::max(1, grid.n() / 32);
  for (int i = 0; i < grid.n(); i += stride) {
    const Vec q{static_cast<double>(i) / grid.n(), 0.0};
    for (int j = 0; j < samples; ++j) {
      const double v = samples == 1 ? 0.0 : -vmax + 2.0 * vmax * j / (samples - 1);
      const auto r = legendre_transform(spec, q, {v, 0.0});
      f << format_double(q[0]) << ',' << format_double(v) << ',' << format_double(r.value) << ','
        << format_double(r.momentum[0]) << '\n';
    }
  }
  c.out << "wrote " << (c.out_dir / "legendre.csv").string() << '\n';
  return 0;
}

int cmd_kernel(Context& c) {
  const auto spec = c.cfg.hamiltonian();
  const auto k = assemble_kernel(spec, c.cfg.grid(), c.cfg.kernel, c.exec);
  fs::path path = !c.g.kernel_cache.empty() ? fs::path(c.g.kernel_cache)
                  : !c.cfg.cache.empty()    ? fs::path(c.cfg.cache)
                                            : c.out_dir / "kernel.bin";
  write_kernel_cache(path, k);
  c.out << "kernel " << k.grid().size() << "x" << k.grid().size() << " t=" << k.horizon() << " -> " << path.string()
        << '\n';
  return 0;
}

int cmd_critical_value(Context& c) {
  const auto spec = c.cfg.hamiltonian();
  const auto k = obtain_kernel(c, spec);
  const auto cv = critical_value(k, spec);
  char line[128];
  std::snprintf(line, sizeof line, "c=%.9f\n", cv.c);
  c.out << line << "lambda=" << format_double(cv.lambda) << " infmax_upper=" << format_double(cv.crosscheck_upper)
        << '\n';
  auto f = open_out(c.out_dir / "critical_value.csv");
  f << "c,lambda,infmax_upper\n"
    << format_double(cv.c) << ',' << format_double(cv.lambda) << ',' << format_double(cv.crosscheck_upper) << '\n';
  return 0;
}

int cmd_weak_kam(Context& c) {
  const auto spec = c.cfg.hamiltonian();
  const auto k = obtain_kernel(c, spec);
  const double cval = critical_value(k, spec).c;
  WeakKamOptions opts;
  opts.tol = c.cfg.weak_kam_tol;
  opts.exec = c.exec;
  const auto minus = weak_kam_solve(k, cval, LaxOleinik::kNegative, opts);
  const auto pair = conjugate_pair(minus.u, k, cval, c.cfg.weak_kam_tol, opts.max_iter, c.exec);
  {
    auto f = open_out(c.out_dir / "u_minus.csv");
    write_field_csv(f, pair.u_minus, "u_minus");
  }
  {
    auto f = open_out(c.out_dir / "u_plus.csv");
    write_field_csv(f, pair.u_plus, "u_plus");
  }
  c.out << "c=" << format_double(cval) << " residual_minus=" << format_double(pair.residual_minus)
        << " residual_plus=" << format_double(pair.residual_plus) << '\n';
  if (c.g.plot) {
    const auto x = axis_coords(k.grid());
    write_svg_plot(c.out_dir / "u_pm.svg", "weak KAM solutions",
                   {{"u_minus", x, axis_slice(pair.u_minus)}, {"u_plus", x, axis_slice(pair.u_plus)}});
  }
  return 0;
}

BarrierResult compute_barrier(Context& c, const HamiltonianSpec& spec) {
  const auto k = obtain_kernel(c, spec);
  const double cval = critical_value(k, spec).c;
  BarrierOptions opts;
  opts.tol = c.cfg.barrier_tol;
  opts.exec = c.exec;
  return peierls_barrier(k, cval, opts);
}

int cmd_barrier(Context& c) {
  const auto spec = c.cfg.hamiltonian();
  const auto b = compute_barrier(c, spec);
  {
    auto f = open_out(c.out_dir / "barrier.csv");
    write_barrier_csv(f, b);
  }
  const auto& kp = c.cfg.kernel;
  write_kernel_cache(c.out_dir / "barrier.bin", ActionKernel(b.grid, b.horizon, kp.winding, kp.substeps, b.h));
  c.out << "c=" << format_double(b.c) << " diag_min=" << format_double(b.diag_min)
        << " aubry_nodes=" << b.aubry.nodes.size() << '\n';
  if (c.g.plot) {
    std::vector<PlotSeries> s;
    const auto x = axis_coords(b.grid);
    const int n = b.grid.n();
    for (int src : {0, n / 4, n / 2, 3 * n / 4}) {
      std::vector<double> y(static_cast<std::size_t>(n));
      const auto from = b.grid.index({src, 0});
      for (int i = 0; i < n; ++i) y[i] = b(from, b.grid.index({i, 0}));
      s.push_back({"h(" + format_double(static_cast<double>(src) / n) + ", .)", x, y});
    }
    write_svg_plot(c.out_dir / "barrier.svg", "Peierls barrier slices", s);
  }
  return 0;
}

int cmd_aubry(Context& c) {
  const auto spec = c.cfg.hamiltonian();
  const auto b = compute_barrier(c, spec);
  auto f = open_out(c.out_dir / "aubry.csv");
  write_aubry_csv(f, b);
  c.out << "aubry_nodes=" << b.aubry.nodes.size() << " tol=" << format_double(b.aubry.tol)
        << (b.aubry.widened ? " (widened)" : "") << '\n';
  return 0;
}

int cmd_selector(Context& c) {
  const auto curve = load_curve(c.cfg);
  const TorusGrid grid(1, c.cfg.n);
  BranchTable table = [&] {
    try {
      return branch_decompose(curve, grid);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kFoldOnNode) throw;
      return branch_decompose(curve, grid, 1e-6 / grid.n());
    }
  }();
  const auto phi = selector(table);
  {
    auto f = open_out(c.out_dir / "phi.csv");
    write_phi_csv(f, phi, table);
  }
  const auto ax = selector_axiom_check(phi, table, curve);
  c.out << "folds=" << table.fold_count << " exceptional=" << ax.exceptional_nodes
        << " axioms=" << (ax.pass ? "pass" : "fail") << '\n';
  if (c.g.plot) {
    PlotSeries branches{"branch values S_k", {}, {}, true};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (const auto& br : table.branches[i]) {
        branches.x.push_back(grid.node(i)[0]);
        branches.y.push_back(br.s_value);
      }
    }
    write_svg_plot(c.out_dir / "phi.svg", "selector vs curve branches",
                   {branches, {"Phi", axis_coords(grid), axis_slice(phi)}});
  }
  return 0;
}

int cmd_verify(Context& c) {
  const auto spec = c.cfg.hamiltonian();
  const auto vc = c.cfg.verifier(c.g.threads);
  VerifierReport report;
  if (has_curve(c.cfg)) {
    report = verify_birkhoff(spec, load_curve(c.cfg), vc);
  } else if (spec.family() == Family::kAdapted) {
    const TorusGrid grid = c.cfg.grid();
    const auto& u = spec.series();
    std::vector<Vec> du(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) du[i] = u.gradient(grid.node(i));
    report = verify_graph_field(spec, u.sample(grid), vc, std::move(du));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "verify needs a curve, or an adapted Hamiltonian for graph form");
  }
  {
    auto f = open_out(c.out_dir / "report.jsonl");
    write_report_jsonl(f, report);
  }
  {
    auto f = open_out(c.out_dir / "report.txt");
    write_report_text(f, report);
  }
  write_report_text(c.out, report);
  return exit_code(report.verdict);
}

int cmd_flow(Context& c, const std::vector<double>& q, const std::vector<double>& p, double T, double dt) {
  const auto spec = c.cfg.hamiltonian();
  const int d = spec.dim();
  if (static_cast<int>(q.size()) != d || static_cast<int>(p.size()) != d) {
    throw Error(ErrorCode::kInvalidArgument, "--q and --p need " + std::to_string(d) + " components");
  }
  const auto x0 = make_phase_point(d, {q[0], d == 2 ? q[1] : 0.0}, {p[0], d == 2 ? p[1] : 0.0});
  const auto traj = flow_integrate(spec, x0, T, dt);
  {
    auto f = open_out(c.out_dir / "trajectory.csv");
    write_trajectory_csv(f, spec, traj);
  }
  c.out << "steps=" << traj.points.size() - 1 << " H0=" << format_double(eval_H(spec, traj.points.front()))
        << " H1=" << format_double(eval_H(spec, traj.points.back())) << '\n';
  if (c.g.plot) {
    PlotSeries s{"orbit", {}, {}, true};
    const std::size_t stride = std::max<std::size_t>(1, traj.points.size() / 2000);
    for (std::size_t j = 0; j < traj.points.size(); j += stride) {
      s.x.push_back(traj.points[j].q[0]);
      s.y.push_back(traj.points[j].p[0]);
    }
    write_svg_plot(c.out_dir / "flow.svg", "phase portrait (q, p)", {s});
  }
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak KAM toolkit on discretized tori"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Run configuration file");
  app.add_option("--kernel-cache", g.kernel_cache, "Kernel cache file (read if present)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_flag("--plot", g.plot, "Also write SVG plots");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--seed", g.seed, "Reserved");

  double vmax = 2.0;
  int samples = 81;
  auto* legendre = app.add_subcommand("legendre", "Tabulate L(q, v)");
  legendre->add_option("--vmax", vmax);
  legendre->add_option("--samples", samples)->check(CLI::PositiveNumber);
  auto* kernel = app.add_subcommand("kernel", "Assemble the action kernel and write the cache");
  auto* crit = app.add_subcommand("critical-value", "Critical value c");
  auto* wk = app.add_subcommand("weak-kam", "Weak KAM solutions u_minus and u_plus");
  auto* barrier = app.add_subcommand("barrier", "Peierls barrier matrix");
  auto* aubry = app.add_subcommand("aubry", "Projected Aubry set");
  auto* sel = app.add_subcommand("selector", "Function selector of the configured curve");
  auto* verify = app.add_subcommand("verify", "Full verifier report");
  std::vector<double> fq{0.0};
  std::vector<double> fp{0.0};
  double fT = 10.0;
  double fdt = 1e-3;
  auto* flow = app.add_subcommand("flow", "Integrate one orbit");
  flow->add_option("--q", fq)->delimiter(',');
  flow->add_option("--p", fp)->delimiter(',');
  flow->add_option("--T", fT);
  flow->add_option("--dt", fdt);

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    RunConfig cfg = g.config.empty() ? RunConfig{} : load_config(fs::path(g.config));
    if (g.plot) cfg.plot = true;
    g.plot = cfg.plot;
    fs::path dir = cfg.out_dir;
    if (const char* env = std::getenv("WKAM_OUT"); env && *env) dir = env;
    if (!g.out.empty()) dir = g.out;
    fs::create_directories(dir);
    Context c{cfg, g, dir, Exec{g.threads}, out};

    if (*legendre) return cmd_legendre(c, vmax, samples);
    if (*kernel) return cmd_kernel(c);
    if (*crit) return cmd_critical_value(c);
    if (*wk) return cmd_weak_kam(c);
    if (*barrier) return cmd_barrier(c);
    if (*aubry) return cmd_aubry(c);
    if (*sel) return cmd_selector(c);
    if (*verify) return cmd_verify(c);
    if (*flow) return cmd_flow(c, fq, fp, fT, fdt);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace wkam::cli
