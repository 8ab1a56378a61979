#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "linforget/sweep.hpp"

namespace linforget {

namespace {

// Plot geometry (pixels).
constexpr double kWidth = 880.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 700.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 500.0;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(int exponent) {
  if (exponent >= -3 && exponent <= 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::pow(10.0, exponent));
    return buf;
  }
  return "1e" + std::to_string(exponent);
}

struct Axes {
  double x_lo, x_hi;    // p range
  double y_lo, y_hi;    // log10(risk) range
  double x(double p) const {
    return kLeft + (p - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
  }
  double y(double risk) const {
    const double t = (std::log10(risk) - y_lo) / (y_hi - y_lo);
    return kBottom - t * (kBottom - kTop);
  }
};

std::string polyline(const std::string& id, const Axes& axes,
                     const std::vector<double>& ps,
                     const std::vector<double>& values,
                     const std::string& color, bool dashed) {
  std::string points;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) points += ' ';
    points += px(axes.x(ps[i])) + ',' + px(axes.y(values[i]));
  }
  std::string elem = "  <polyline id=\"" + id + "\" points=\"" + points +
                     "\" fill=\"none\" stroke=\"" + color +
                     "\" stroke-width=\"2\"";
  if (dashed) elem += " stroke-dasharray=\"7 5\"";
  elem += "/>\n";
  return elem;
}

}  // namespace

void emit_plot(const SweepResult& result, const std::string& path) {
  if (result.summary.empty() || result.rows.empty())
    throw Error("emit_plot: empty sweep result");

  std::vector<double> ps, mean_a, mean_ba;
  for (const SweepSummaryRow& row : result.summary) {
    ps.push_back(static_cast<double>(row.p));
    mean_a.push_back(row.mean_risk_a);
    mean_ba.push_back(row.mean_risk_ba);
  }
  double null_mean = 0.0;
  for (const SweepRow& row : result.rows) null_mean += row.risk_null;
  null_mean /= static_cast<double>(result.rows.size());
  const std::vector<double> nulls(ps.size(), null_mean);

  double v_lo = null_mean, v_hi = null_mean;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    v_lo = std::min({v_lo, mean_a[i], mean_ba[i]});
    v_hi = std::max({v_hi, mean_a[i], mean_ba[i]});
  }
  v_lo = std::max(v_lo, 1e-12);  // log axis needs positive values
  v_hi = std::max(v_hi, v_lo * 1.0001);

  Axes axes;
  axes.y_lo = std::floor(std::log10(v_lo));
  axes.y_hi = std::ceil(std::log10(v_hi));
  if (axes.y_hi - axes.y_lo < 1.0) axes.y_hi = axes.y_lo + 1.0;
  const double p_min = ps.front();
  const double p_max = ps.back();
  const double pad = std::max((p_max - p_min) * 0.04, p_max * 0.02);
  axes.x_lo = p_min - pad;
  axes.x_hi = p_max + pad;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) +
         "\" height=\"" + px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) +
         " " + px(kHeight) + "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Frame.
  svg += "  <rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" +
         px(kRight - kLeft) + "\" height=\"" + px(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // Horizontal (p) ticks at the grid points, thinned to at most eight.
  const std::size_t stride = ps.size() <= 8 ? 1 : (ps.size() + 7) / 8;
  for (std::size_t i = 0; i < ps.size(); i += stride) {
    const double x = axes.x(ps[i]);
    svg += "  <line x1=\"" + px(x) + "\" y1=\"" + px(kBottom) + "\" x2=\"" +
           px(x) + "\" y2=\"" + px(kBottom + 6) +
           "\" stroke=\"black\"/>\n";
    svg += "  <text x=\"" + px(x) + "\" y=\"" + px(kBottom + 22) +
           "\" font-size=\"13\" text-anchor=\"middle\">" +
           std::to_string(static_cast<long long>(ps[i])) + "</text>\n";
  }

  // Vertical (risk) ticks at powers of ten, with minor gridlines.
  for (int e = static_cast<int>(axes.y_lo); e <= static_cast<int>(axes.y_hi);
       ++e) {
    const double y = axes.y(std::pow(10.0, e));
    svg += "  <line x1=\"" + px(kLeft - 6) + "\" y1=\"" + px(y) +
           "\" x2=\"" + px(kLeft) + "\" y2=\"" + px(y) +
           "\" stroke=\"black\"/>\n";
    svg += "  <line x1=\"" + px(kLeft) + "\" y1=\"" + px(y) + "\" x2=\"" +
           px(kRight) + "\" y2=\"" + px(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "  <text x=\"" + px(kLeft - 10) + "\" y=\"" + px(y + 4) +
           "\" font-size=\"13\" text-anchor=\"end\">" + tick_label(e) +
           "</text>\n";
  }

  svg += "  <text x=\"" + px((kLeft + kRight) / 2) + "\" y=\"" +
         px(kHeight - 12) + "\" font-size=\"14\" text-anchor=\"middle\">"
         "observed dimension p</text>\n";
  svg += "  <text x=\"20\" y=\"" + px((kTop + kBottom) / 2) +
         "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "20 " + px((kTop + kBottom) / 2) + ")\">task-A risk (log scale)"
         "</text>\n";

  svg += polyline("risk-null", axes, ps, nulls, "#555555", true);
  svg += polyline("risk-a", axes, ps, mean_a, "#1f77b4", false);
  svg += polyline("risk-ba", axes, ps, mean_ba, "#ff7f0e", false);

  // Legend.
  const double lx = kRight + 14;
  const char* entries[3][2] = {{"#555555", "null risk"},
                               {"#1f77b4", "risk after task A"},
                               {"#ff7f0e", "risk after task A, then B"}};
  for (int i = 0; i < 3; ++i) {
    const double ly = kTop + 16 + 22.0 * i;
    svg += "  <line x1=\"" + px(lx) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" +
           px(lx + 26) + "\" y2=\"" + px(ly - 4) + "\" stroke=\"" +
           std::string(entries[i][0]) + "\" stroke-width=\"2\"" +
           (i == 0 ? " stroke-dasharray=\"7 5\"" : "") + "/>\n";
    svg += "  <text x=\"" + px(lx + 32) + "\" y=\"" + px(ly) +
           "\" font-size=\"13\">" + entries[i][1] + "</text>\n";
  }

  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << svg;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace linforget
