#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wkam/io.hpp"

namespace wkam {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

void write_node_coords(std::ostream& os, const TorusGrid& g, std::size_t i) {
  const Vec q = g.node(i);
  os << i << ',' << format_double(q[0]);
  if (g.dim() == 2) os << ',' << format_double(q[1]);
}

std::string coord_header(int dim) { return dim == 2 ? "node,q1,q2" : "node,q"; }

}  // namespace

LagrangianCurve read_curve_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::kIo, "curve CSV is empty");
  const auto header = split(line);
  int iq = -1;
  int ip = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "q") iq = static_cast<int>(c);
    if (header[c] == "p") ip = static_cast<int>(c);
  }
  if (iq < 0 || ip < 0) throw Error(ErrorCode::kIo, "curve CSV needs columns q and p");
  std::vector<CurvePoint> pts;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() <= static_cast<std::size_t>(std::max(iq, ip))) {
      throw Error(ErrorCode::kIo, "curve CSV row " + std::to_string(row) + " is short");
    }
    try {
      pts.push_back({std::stod(cells[iq]), std::stod(cells[ip])});
    } catch (const std::exception&) {
      throw Error(ErrorCode::kIo, "curve CSV row " + std::to_string(row) + " is not numeric");
    }
  }
  return LagrangianCurve(std::move(pts));
}

LagrangianCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_curve_csv(in);
}

void write_curve_csv(std::ostream& os, const LagrangianCurve& curve) {
  os << "s,q,p\n";
  for (std::size_t k = 0; k < curve.size(); ++k) {
    os << format_double(static_cast<double>(k) / static_cast<double>(curve.size())) << ','
       << format_double(curve[k].q) << ',' << format_double(curve[k].p) << '\n';
  }
}

void write_field_csv(std::ostream& os, const GridField& u, const std::string& column) {
  const TorusGrid& g = u.grid();
  os << coord_header(g.dim()) << ',' << column << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    write_node_coords(os, g, i);
    os << ',' << format_double(u[i]) << '\n';
  }
}

void write_phi_csv(std::ostream& os, const GridField& phi, const BranchTable& table) {
  const TorusGrid& g = phi.grid();
  const auto grad = discrete_gradient(phi);
  os << "node,q,phi,dphi,branch_count\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << i << ',' << format_double(g.node(i)[0] + table.offset) << ',' << format_double(phi[i]) << ','
       << format_double(grad.du[i][0]) << ',' << table.branch_count(i) << '\n';
  }
}

void write_barrier_csv(std::ostream& os, const BarrierResult& b) {
  const std::size_t n = b.h.size();
  os << "from";
  for (std::size_t j = 0; j < n; ++j) os << ",h" << j;
  os << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    os << i;
    for (std::size_t j = 0; j < n; ++j) os << ',' << format_double(b(i, j));
    os << '\n';
  }
}

void write_aubry_csv(std::ostream& os, const BarrierResult& b) {
  os << coord_header(b.grid.dim()) << '\n';
  for (std::size_t i : b.aubry.nodes) {
    write_node_coords(os, b.grid, i);
    os << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const HamiltonianSpec& spec, const Trajectory& traj) {
  const bool two = spec.dim() == 2;
  os << (two ? "t,q1,q2,p1,p2,H\n" : "t,q,p,H\n");
  for (std::size_t j = 0; j < traj.points.size(); ++j) {
    const auto& x = traj.points[j];
    os << format_double(static_cast<double>(j) * traj.dt) << ',' << format_double(x.q[0]);
    if (two) os << ',' << format_double(x.q[1]);
    os << ',' << format_double(x.p[0]);
    if (two) os << ',' << format_double(x.p[1]);
    os << ',' << format_double(eval_H(spec, x)) << '\n';
  }
}

}  // namespace wkam
