#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkmuddle/experiments.hpp"

namespace nkmuddle {

struct PlotSpec {
  std::string metric = "fitness";         // fitness | hamming | evaluations
  std::vector<std::string> series;        // algorithm ids; empty = all present
};

namespace detail {

struct MetricAccessor {
  double (*mean)(const AggregateRow&);
  double (*se)(const AggregateRow&);
  const char* label;
};

inline MetricAccessor metric_accessor(const std::string& metric) {
  if (metric == "fitness")
    return {[](const AggregateRow& r) { return r.mean_fitness; },
            [](const AggregateRow& r) { return r.se_fitness; }, "mean best fitness"};
  if (metric == "hamming")
    return {[](const AggregateRow& r) { return r.mean_hamming; },
            [](const AggregateRow& r) { return r.se_hamming; }, "mean hamming distance"};
  if (metric == "evaluations")
    return {[](const AggregateRow& r) { return r.mean_evaluations; },
            [](const AggregateRow& r) { return r.se_evaluations; }, "mean evaluations"};
  throw std::invalid_argument("unknown metric '" + metric +
                              "' (available: fitness, hamming, evaluations)");
}

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string fmtg(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// largest {1,2,5}*10^m step that yields at least `want` intervals
inline double nice_step(double range, int want) {
  if (range <= 0) return 1.0;
  const double raw = range / want;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0})
    if (raw <= mult * mag) return mult * mag;
  return 10.0 * mag;
}

}  // namespace detail

// Deterministic line chart over aggregate rows: x = K, y = metric mean with
// +/- 1 standard error bars, one polyline per algorithm.
inline std::string render_plot_svg(const std::vector<AggregateRow>& rows,
                                   const PlotSpec& plot) {
  const auto metric = detail::metric_accessor(plot.metric);

  std::vector<std::string> series = plot.series;
  if (series.empty())
    for (const auto& r : rows)
      if (std::find(series.begin(), series.end(), r.algorithm) == series.end())
        series.push_back(r.algorithm);

  struct Point {
    double k, mean, se;
  };
  std::vector<std::vector<Point>> data;
  for (const auto& id : series) {
    std::vector<Point> points;
    for (const auto& r : rows)
      if (r.algorithm == id) points.push_back({double(r.k), metric.mean(r), metric.se(r)});
    if (points.empty()) {
      std::string available;
      for (const auto& r : rows)
        if (available.find(r.algorithm) == std::string::npos)
          available += (available.empty() ? "" : ", ") + r.algorithm;
      throw std::invalid_argument("series '" + id + "' not present in aggregates (available: " +
                                  available + ")");
    }
    std::sort(points.begin(), points.end(),
              [](const Point& a, const Point& b) { return a.k < b.k; });
    data.push_back(std::move(points));
  }

  double kmin = data[0][0].k, kmax = kmin;
  double vmin = 0.0, vmax = 0.0;
  bool first = true;
  for (const auto& points : data)
    for (const auto& p : points) {
      kmin = std::min(kmin, p.k);
      kmax = std::max(kmax, p.k);
      const double lo = p.mean - p.se, hi = p.mean + p.se;
      if (first) {
        vmin = lo;
        vmax = hi;
        first = false;
      } else {
        vmin = std::min(vmin, lo);
        vmax = std::max(vmax, hi);
      }
    }
  if (kmax == kmin) {
    kmin -= 1.0;
    kmax += 1.0;
  }
  if (vmax == vmin) {
    vmin -= 0.5;
    vmax += 0.5;
  }
  const double vpad = 0.05 * (vmax - vmin);
  vmin -= vpad;
  vmax += vpad;

  const double x0 = 70, x1 = 600, y0 = 440, y1 = 50;  // y axis grows upward
  const auto sx = [&](double k) { return x0 + (k - kmin) / (kmax - kmin) * (x1 - x0); };
  const auto sy = [&](double v) { return y0 + (v - vmin) / (vmax - vmin) * (y1 - y0); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const std::size_t palette_size = sizeof palette / sizeof palette[0];

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"820\" height=\"500\" "
         "viewBox=\"0 0 820 500\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg += "<rect width=\"820\" height=\"500\" fill=\"white\"/>\n";
  svg += "<text x=\"335\" y=\"25\" text-anchor=\"middle\" font-size=\"16\">" +
         std::string(metric.label) + " vs K</text>\n";

  // axes
  svg += "<line x1=\"" + detail::fmt2(x0) + "\" y1=\"" + detail::fmt2(y0) + "\" x2=\"" +
         detail::fmt2(x1) + "\" y2=\"" + detail::fmt2(y0) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + detail::fmt2(x0) + "\" y1=\"" + detail::fmt2(y0) + "\" x2=\"" +
         detail::fmt2(x0) + "\" y2=\"" + detail::fmt2(y1) + "\" stroke=\"black\"/>\n";

  // x ticks at every distinct k present
  std::vector<double> ks;
  for (const auto& points : data)
    for (const auto& p : points)
      if (std::find(ks.begin(), ks.end(), p.k) == ks.end()) ks.push_back(p.k);
  std::sort(ks.begin(), ks.end());
  for (double k : ks) {
    const double x = sx(k);
    svg += "<line x1=\"" + detail::fmt2(x) + "\" y1=\"" + detail::fmt2(y0) + "\" x2=\"" +
           detail::fmt2(x) + "\" y2=\"" + detail::fmt2(y0 + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::fmt2(x) + "\" y=\"" + detail::fmt2(y0 + 20) +
           "\" text-anchor=\"middle\">" + detail::fmtg(k) + "</text>\n";
  }
  svg += "<text x=\"335\" y=\"480\" text-anchor=\"middle\">K</text>\n";

  // y ticks on a nice grid
  const double step = detail::nice_step(vmax - vmin, 6);
  for (double v = std::ceil(vmin / step) * step; v <= vmax + 1e-12 * step; v += step) {
    const double y = sy(v);
    svg += "<line x1=\"" + detail::fmt2(x0 - 5) + "\" y1=\"" + detail::fmt2(y) + "\" x2=\"" +
           detail::fmt2(x0) + "\" y2=\"" + detail::fmt2(y) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + detail::fmt2(x0) + "\" y1=\"" + detail::fmt2(y) + "\" x2=\"" +
           detail::fmt2(x1) + "\" y2=\"" + detail::fmt2(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    svg += "<text x=\"" + detail::fmt2(x0 - 10) + "\" y=\"" + detail::fmt2(y + 4) +
           "\" text-anchor=\"end\">" + detail::fmtg(v) + "</text>\n";
  }
  svg += "<text x=\"18\" y=\"245\" text-anchor=\"middle\" transform=\"rotate(-90 18 245)\">" +
         std::string(metric.label) + "</text>\n";

  // series
  for (std::size_t s = 0; s < data.size(); ++s) {
    const char* color = palette[s % palette_size];
    std::string polyline;
    for (const auto& p : data[s]) {
      polyline += detail::fmt2(sx(p.k)) + "," + detail::fmt2(sy(p.mean)) + " ";
      if (p.se > 0.0) {
        const double x = sx(p.k), lo = sy(p.mean - p.se), hi = sy(p.mean + p.se);
        svg += "<line x1=\"" + detail::fmt2(x) + "\" y1=\"" + detail::fmt2(lo) + "\" x2=\"" +
               detail::fmt2(x) + "\" y2=\"" + detail::fmt2(hi) + "\" stroke=\"" + color +
               "\"/>\n";
        for (double cap : {lo, hi})
          svg += "<line x1=\"" + detail::fmt2(x - 3) + "\" y1=\"" + detail::fmt2(cap) +
                 "\" x2=\"" + detail::fmt2(x + 3) + "\" y2=\"" + detail::fmt2(cap) +
                 "\" stroke=\"" + color + "\"/>\n";
      }
      svg += "<circle cx=\"" + detail::fmt2(sx(p.k)) + "\" cy=\"" + detail::fmt2(sy(p.mean)) +
             "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
    }
    if (!polyline.empty()) polyline.pop_back();
    svg += "<polyline points=\"" + polyline + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
  }

  // legend
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double y = 60 + 22.0 * s;
    const char* color = palette[s % palette_size];
    svg += "<line x1=\"625\" y1=\"" + detail::fmt2(y) + "\" x2=\"655\" y2=\"" +
           detail::fmt2(y) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"662\" y=\"" + detail::fmt2(y + 4) + "\">" + series[s] + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace nkmuddle
