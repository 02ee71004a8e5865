#include "npsac/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "npsac/error.hpp"

namespace npsac {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_sweep_svg(std::span<const SweepRow> rows, const std::string& title) {
  if (rows.empty()) throw Error(Errc::InvalidConfig, "nothing to plot");
  constexpr double W = 640, H = 400, L = 60, R = 130, T = 40, B = 50;
  const double x0 = rows.front().threshold;
  const double x1 = std::max(rows.back().threshold, x0 + 1e-9);
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - y * (H - T - B); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title) << "</text>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << W - R << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << L << "\" y2=\"" << py(1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = i / 5.0;
    svg << "<text x=\"" << L - 8 << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  for (const auto& r : rows)
    svg << "<text x=\"" << num(px(r.threshold)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
        << num(r.threshold) << "</text>\n";
  svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">cosine threshold</text>\n";

  struct Series {
    const char* name;
    const char* color;
    double (*get)(const SweepRow&);
  };
  const Series series[] = {
      {"Precision", "#1f77b4", [](const SweepRow& r) { return r.metrics.precision; }},
      {"Recall", "#d62728", [](const SweepRow& r) { return r.metrics.recall; }},
      {"F1-Score", "#2ca02c", [](const SweepRow& r) { return r.metrics.f1; }},
      {"F2-Score", "#9467bd", [](const SweepRow& r) { return r.metrics.f2; }},
  };
  int legend = 0;
  for (const auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (const auto& r : rows) svg << num(px(r.threshold)) << ',' << num(py(s.get(r))) << ' ';
    svg << "\"/>\n";
    const double ly = T + 10 + 18 * legend++;
    svg << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 32 << "\" y2=\"" << ly
        << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << W - R + 38 << "\" y=\"" << ly + 4 << "\">" << s.name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace npsac
