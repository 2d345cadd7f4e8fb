#include "mdbt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace mdbt {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 50.0;
constexpr double kGapFloor = 1e-16;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double parse_meta_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::string render_convergence_svg(const std::vector<RunTrace>& traces,
                                   const std::vector<std::string>& labels,
                                   std::optional<double> f_star) {
  if (traces.empty()) throw std::invalid_argument("svg: no traces");
  if (labels.size() != traces.size())
    throw std::invalid_argument("svg: labels/traces size mismatch");

  double fs = f_star.value_or(std::numeric_limits<double>::quiet_NaN());
  if (!std::isfinite(fs)) {
    // Prefer exact optima recorded by the runner; otherwise estimate from
    // the best value any method reached.
    double from_meta = std::numeric_limits<double>::infinity();
    double from_events = std::numeric_limits<double>::infinity();
    for (const RunTrace& t : traces) {
      if (const std::string* m = t.find_meta("f_star")) {
        const double v = parse_meta_double(*m);
        if (std::isfinite(v)) from_meta = std::min(from_meta, v);
      }
      if (const std::string* m = t.find_meta("f_init"))
        from_events = std::min(from_events, parse_meta_double(*m));
      for (const TraceEvent& e : t.events)
        if (std::isfinite(e.f_value)) from_events = std::min(from_events, e.f_value);
    }
    fs = std::isfinite(from_meta) ? from_meta : from_events;
    if (!std::isfinite(fs)) fs = 0.0;
  }

  double x_max = 1.0;
  double y_lo = 0.0, y_hi = -16.0;  // log10 gap range
  bool any_point = false;
  for (const RunTrace& t : traces) {
    for (const TraceEvent& e : t.events) {
      if (!std::isfinite(e.f_value)) continue;
      x_max = std::max(x_max, static_cast<double>(e.total_oracle_calls()));
      const double gap = std::max(e.f_value - fs, kGapFloor);
      const double ly = std::log10(gap);
      if (!any_point) {
        y_lo = y_hi = ly;
        any_point = true;
      } else {
        y_lo = std::min(y_lo, ly);
        y_hi = std::max(y_hi, ly);
      }
    }
  }
  if (!any_point) {
    y_lo = -16.0;
    y_hi = 0.0;
  }
  y_lo = std::floor(y_lo);
  y_hi = std::ceil(y_hi);
  if (y_hi - y_lo < 1.0) y_hi = y_lo + 1.0;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double calls) {
    return kMarginLeft + plot_w * (calls / x_max);
  };
  auto py = [&](double ly) {
    return kMarginTop + plot_h * (y_hi - ly) / (y_hi - y_lo);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + fmt6(kMarginLeft) + "\" y=\"" + fmt6(kMarginTop) +
         "\" width=\"" + fmt6(plot_w) + "\" height=\"" + fmt6(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks at quarters; y ticks at integer exponents
  for (int i = 0; i <= 4; ++i) {
    const double xv = i / 4.0 * x_max;
    const double xpx = px(xv);
    svg += "<line x1=\"" + fmt6(xpx) + "\" y1=\"" + fmt6(kMarginTop + plot_h) +
           "\" x2=\"" + fmt6(xpx) + "\" y2=\"" + fmt6(kMarginTop + plot_h + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt6(xpx) + "\" y=\"" + fmt6(kMarginTop + plot_h + 20) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + fmt6(xv) + "</text>\n";
  }
  const double y_step = std::max(1.0, std::round((y_hi - y_lo) / 4.0));
  for (double yv = y_hi; yv >= y_lo - 1e-9; yv -= y_step) {
    const double ypx = py(yv);
    svg += "<line x1=\"" + fmt6(kMarginLeft - 5) + "\" y1=\"" + fmt6(ypx) +
           "\" x2=\"" + fmt6(kMarginLeft) + "\" y2=\"" + fmt6(ypx) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt6(kMarginLeft - 10) + "\" y=\"" + fmt6(ypx + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">1e" + fmt6(yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt6(kMarginLeft + plot_w / 2) + "\" y=\"" +
         fmt6(kHeight - 10) +
         "\" font-size=\"14\" text-anchor=\"middle\">function and gradient "
         "evaluations</text>\n";
  svg += "<text x=\"15\" y=\"" + fmt6(kMarginTop + plot_h / 2) +
         "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
         fmt6(kMarginTop + plot_h / 2) + ")\">suboptimality</text>\n";

  for (std::size_t ti = 0; ti < traces.size(); ++ti) {
    const char* color = kPalette[ti % (sizeof kPalette / sizeof kPalette[0])];
    std::string points;
    for (const TraceEvent& e : traces[ti].events) {
      if (!std::isfinite(e.f_value)) continue;
      const double gap = std::max(e.f_value - fs, kGapFloor);
      points += fmt6(px(static_cast<double>(e.total_oracle_calls()))) + "," +
                fmt6(py(std::log10(gap))) + " ";
    }
    if (!points.empty()) points.pop_back();
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";

    const double ly = kMarginTop + 15.0 + 18.0 * static_cast<double>(ti);
    svg += "<line x1=\"" + fmt6(kWidth - kMarginRight - 150) + "\" y1=\"" +
           fmt6(ly - 4) + "\" x2=\"" + fmt6(kWidth - kMarginRight - 125) +
           "\" y2=\"" + fmt6(ly - 4) + "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + fmt6(kWidth - kMarginRight - 120) + "\" y=\"" + fmt6(ly) +
           "\" font-size=\"12\">" + labels[ti] + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace mdbt
