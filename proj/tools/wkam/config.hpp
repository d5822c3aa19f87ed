#pragma once

// Run configuration: flat key = value lines under [section] headers with
// '#' comments. See README for the key list.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "wkam/minplus.hpp"
#include "wkam/systems.hpp"
#include "wkam/verifier.hpp"

namespace wkam::cli {

using IniSections = std::map<std::string, std::map<std::string, std::string>>;

IniSections parse_ini(std::istream& is);

struct RunConfig {
  std::string family = "adapted";  // mechanical | adapted | free | pendulum
  int dim = 1;
  std::string terms;               // "k1 k2 cos sin; ..." (empty: built-in fixture)
  double p_max = 10.0;
  int n = 256;
  KernelParams kernel{1.0, 2, 4};
  std::string cache;
  // Named tolerance overrides.
  double exact_tol = 1e-6;
  double level_tol = 1e-6;
  double invariance_tol = 1e-3;
  double domination_tol = 1e-6;
  double barrier_tol = 1e-6;
  double weak_kam_tol = 1e-10;
  double c_tol = 1e-3;
  double graph_tol = 0.0;  // 0 means 2/n
  std::string curve_path;
  std::string curve_fixture;  // graph | zero | circle:<p0> | fold
  std::filesystem::path out_dir = "wkam_out";
  bool plot = false;

  HamiltonianSpec hamiltonian() const;
  TorusGrid grid() const { return TorusGrid(dim, n); }
  VerifierConfig verifier(unsigned threads) const;
};

/// Throws Error(kInvalidArgument) on unknown sections or keys, malformed
/// numbers, non-positive tolerances or n not a power of two.
RunConfig load_config(std::istream& is);
RunConfig load_config(const std::filesystem::path& path);
void validate(const RunConfig& cfg);

FourierSeries parse_terms(int dim, const std::string& text);

}  // namespace wkam::cli
