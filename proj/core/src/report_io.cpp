#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "wkam/io.hpp"
#include "wkam/verifier.hpp"

namespace wkam {

namespace {

using nlohmann::ordered_json;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_report_jsonl(std::ostream& os, const VerifierReport& report) {
  for (const auto& s : report.stages) {
    ordered_json j;
    j["stage"] = s.name;
    j["pass"] = s.pass;
    j["margin"] = s.margin;
    j["details"] = s.details;
    os << j.dump() << '\n';
  }
  ordered_json v;
  v["stage"] = "verdict";
  v["verdict"] = std::string(to_string(report.verdict));
  v["k_level"] = report.k_level;
  v["c_value"] = report.c_value;
  v["hausdorff_graph_vs_curve"] = report.hausdorff_graph_vs_curve;
  os << v.dump() << '\n';
}

VerifierReport read_report_jsonl(std::istream& is) {
  VerifierReport r;
  bool have_verdict = false;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kIo, std::string("malformed report line: ") + e.what());
    }
    const std::string stage = j.at("stage").get<std::string>();
    if (stage == "verdict") {
      r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
      r.k_level = j.at("k_level").get<double>();
      r.c_value = j.at("c_value").get<double>();
      r.hausdorff_graph_vs_curve = j.at("hausdorff_graph_vs_curve").get<double>();
      have_verdict = true;
    } else {
      r.stages.push_back({stage, j.at("pass").get<bool>(), j.at("margin").get<double>(),
                          j.at("details").get<std::string>()});
    }
  }
  if (!have_verdict) throw Error(ErrorCode::kIo, "report has no verdict line");
  return r;
}

void write_report_text(std::ostream& os, const VerifierReport& report) {
  for (const auto& s : report.stages) {
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %-4s margin=%-14.6g ", s.name.c_str(), s.pass ? "ok" : "FAIL", s.margin);
    os << line << s.details << '\n';
  }
  os << "verdict: " << to_string(report.verdict) << "  k=" << g17(report.k_level) << "  c=" << g17(report.c_value)
     << "  hausdorff=" << g17(report.hausdorff_graph_vs_curve) << '\n';
}

}  // namespace wkam
