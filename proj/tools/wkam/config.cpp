#include <bit>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "wkam/fixtures.hpp"

namespace wkam::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw Error(ErrorCode::kInvalidArgument, key + ": expected a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != static_cast<int>(x)) throw Error(ErrorCode::kInvalidArgument, key + ": expected an integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::kInvalidArgument, key + ": expected a boolean");
}

}  // namespace

IniSections parse_ini(std::istream& is) {
  IniSections out;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    // '#' starts a comment at line start or after whitespace; ';' only at line start.
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty() || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::kInvalidArgument, "line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      out[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "line " + std::to_string(lineno) + ": expected key = value in a section");
    }
    out[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

FourierSeries parse_terms(int dim, const std::string& text) {
  std::vector<FourierSeries::Term> terms;
  std::istringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    if (trim(item).empty()) continue;
    std::istringstream one(item);
    FourierSeries::Term t;
    if (!(one >> t.k[0] >> t.k[1] >> t.cos_coeff >> t.sin_coeff)) {
      throw Error(ErrorCode::kInvalidArgument, "terms: expected 'k1 k2 cos sin', got '" + trim(item) + "'");
    }
    terms.push_back(t);
  }
  return FourierSeries(dim, std::move(terms));
}

HamiltonianSpec RunConfig::hamiltonian() const {
  if (family == "free") return HamiltonianSpec::mechanical(FourierSeries(dim, {}), p_max);
  if (family == "pendulum") {
    if (dim != 1) throw Error(ErrorCode::kInvalidArgument, "the pendulum fixture is one-dimensional");
    return fixtures::pendulum();
  }
  if (family == "mechanical") return HamiltonianSpec::mechanical(parse_terms(dim, terms), p_max);
  if (family == "adapted") {
    if (terms.empty()) {
      return HamiltonianSpec::adapted(dim == 2 ? fixtures::adapted_potential_2d() : fixtures::adapted_potential(), p_max);
    }
    return HamiltonianSpec::adapted(parse_terms(dim, terms), p_max);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown hamiltonian family '" + family + "'");
}

VerifierConfig RunConfig::verifier(unsigned threads) const {
  VerifierConfig v;
  v.n = n;
  v.kernel = kernel;
  v.exact_tol = exact_tol;
  v.level_tol = level_tol;
  v.invariance_tol = invariance_tol;
  v.c_tol = c_tol;
  v.domination.tol = domination_tol;
  v.barrier.tol = barrier_tol;
  v.graph_tol = graph_tol;
  v.exec.threads = threads;
  v.barrier.exec.threads = threads;
  return v;
}

void validate(const RunConfig& c) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::kInvalidArgument, m); };
  if (c.dim != 1 && c.dim != 2) bad("grid.d must be 1 or 2");
  if (c.n < 8 || !std::has_single_bit(static_cast<unsigned>(c.n))) bad("grid.n must be a power of two >= 8");
  if (!(c.kernel.t > 0.0) || c.kernel.winding < 0 || c.kernel.substeps < 1) bad("kernel: need t > 0, W >= 0, m >= 1");
  for (double t : {c.exact_tol, c.level_tol, c.invariance_tol, c.domination_tol, c.barrier_tol, c.weak_kam_tol, c.c_tol}) {
    if (!(t > 0.0)) bad("tolerances must be positive");
  }
  if (c.graph_tol < 0.0) bad("tolerances must be positive");
  if (!c.curve_path.empty() && !c.curve_fixture.empty()) bad("curve: give either path or fixture");
}

RunConfig load_config(std::istream& is) {
  const IniSections ini = parse_ini(is);
  RunConfig c;
  for (const auto& [section, keys] : ini) {
    for (const auto& [key, v] : keys) {
      const std::string name = section + "." + key;
      if (name == "hamiltonian.family") c.family = v;
      else if (name == "hamiltonian.dim" || name == "grid.d") c.dim = to_int(name, v);
      else if (name == "hamiltonian.terms") c.terms = v;
      else if (name == "hamiltonian.p_max") c.p_max = to_double(name, v);
      else if (name == "grid.n") c.n = to_int(name, v);
      else if (name == "kernel.t") c.kernel.t = to_double(name, v);
      else if (name == "kernel.W") c.kernel.winding = to_int(name, v);
      else if (name == "kernel.m") c.kernel.substeps = to_int(name, v);
      else if (name == "kernel.cache") c.cache = v;
      else if (name == "tolerances.exact") c.exact_tol = to_double(name, v);
      else if (name == "tolerances.level") c.level_tol = to_double(name, v);
      else if (name == "tolerances.invariance") c.invariance_tol = to_double(name, v);
      else if (name == "tolerances.domination") c.domination_tol = to_double(name, v);
      else if (name == "tolerances.barrier") c.barrier_tol = to_double(name, v);
      else if (name == "tolerances.weak_kam") c.weak_kam_tol = to_double(name, v);
      else if (name == "tolerances.c") c.c_tol = to_double(name, v);
      else if (name == "tolerances.graph") c.graph_tol = to_double(name, v);
      else if (name == "curve.path") c.curve_path = v;
      else if (name == "curve.fixture") c.curve_fixture = v;
      else if (name == "output.dir") c.out_dir = v;
      else if (name == "output.plot") c.plot = to_bool(name, v);
      else throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + name + "'");
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  return load_config(in);
}

}  // namespace wkam::cli
