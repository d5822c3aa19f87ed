#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "svg.hpp"
#include "wkam/error.hpp"

namespace wkam::cli {

namespace {
constexpr double kW = 640.0;
constexpr double kH = 400.0;
constexpr double kPad = 48.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}
std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}
}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::vector<PlotSeries>& series) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  const auto px = [&](double v) { return kPad + (v - x0) / (x1 - x0) * (kW - 2 * kPad); };
  const auto py = [&](double v) { return kH - kPad - (v - y0) / (y1 - y0) * (kH - 2 * kPad); };

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n"
      << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad << "\" height=\"" << kH - 2 * kPad
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#444\">\n"
      << "<text x=\"" << kPad << "\" y=\"" << kH - kPad + 14 << "\">" << tick(x0) << "</text>\n"
      << "<text x=\"" << kW - kPad << "\" y=\"" << kH - kPad + 14 << "\" text-anchor=\"end\">" << tick(x1) << "</text>\n"
      << "<text x=\"" << kPad - 4 << "\" y=\"" << kH - kPad << "\" text-anchor=\"end\">" << tick(y0) << "</text>\n"
      << "<text x=\"" << kPad - 4 << "\" y=\"" << kPad + 8 << "\" text-anchor=\"end\">" << tick(y1) << "</text>\n</g>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    const std::size_t m = std::min(s.x.size(), s.y.size());
    if (s.markers) {
      out << "<g fill=\"" << color << "\">\n";
      for (std::size_t i = 0; i < m; ++i) {
        out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"1.5\"/>\n";
      }
      out << "</g>\n";
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t i = 0; i < m; ++i) out << (i ? " " : "") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
      out << "\"/>\n";
    }
    out << "<text x=\"" << kW - kPad - 4 << "\" y=\"" << kPad + 14 + 14 * k << "\" text-anchor=\"end\" fill=\"" << color
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace wkam::cli
