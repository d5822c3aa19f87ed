#pragma once

// Plain-text artifacts: CSV tables with a header row, '.' decimals and '\n'
// line endings. Doubles are printed with 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wkam/selector.hpp"
#include "wkam/systems.hpp"
#include "wkam/weakkam.hpp"

namespace wkam {

std::string format_double(double x);

/// Reads columns s, q, p (header required; extra columns ignored).
LagrangianCurve read_curve_csv(std::istream& is);
LagrangianCurve read_curve_csv(const std::filesystem::path& path);
void write_curve_csv(std::ostream& os, const LagrangianCurve& curve);

/// node, q[, q2], value.
void write_field_csv(std::ostream& os, const GridField& u, const std::string& column);
/// node, q, phi, dphi, branch_count.
void write_phi_csv(std::ostream& os, const GridField& phi, const BranchTable& table);
/// Full barrier matrix, one row per source node: from, h_0, ..., h_{N-1}.
void write_barrier_csv(std::ostream& os, const BarrierResult& b);
/// node, q[, q2].
void write_aubry_csv(std::ostream& os, const BarrierResult& b);
/// t, q[, q2], p[, p2], H.
void write_trajectory_csv(std::ostream& os, const HamiltonianSpec& spec, const Trajectory& traj);

}  // namespace wkam
