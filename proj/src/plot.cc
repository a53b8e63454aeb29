#include "gamedyn/plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gamedyn {

PlotMetric parse_plot_metric(std::string_view name) {
  for (PlotMetric m : {PlotMetric::kTwoCycle, PlotMetric::kNe, PlotMetric::kMeanSteps,
                       PlotMetric::kMeanWall, PlotMetric::kTerminalPayoff,
                       PlotMetric::kTrajectoryPayoff}) {
    if (name == plot_metric_name(m)) return m;
  }
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

const char* plot_metric_name(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::kTwoCycle: return "p_two_cycle";
    case PlotMetric::kNe: return "p_ne";
    case PlotMetric::kMeanSteps: return "mean_steps";
    case PlotMetric::kMeanWall: return "mean_wall";
    case PlotMetric::kTerminalPayoff: return "terminal_payoff";
    case PlotMetric::kTrajectoryPayoff: return "traj_payoff";
  }
  return "p_ne";
}

bool is_proportion(PlotMetric metric) {
  return metric == PlotMetric::kTwoCycle || metric == PlotMetric::kNe;
}

namespace {

const char* default_label(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::kTwoCycle: return "P(two-cycle)";
    case PlotMetric::kNe: return "P(NE)";
    case PlotMetric::kMeanSteps: return "steps to convergence";
    case PlotMetric::kMeanWall: return "dynamics time (ns)";
    case PlotMetric::kTerminalPayoff: return "final payoff";
    case PlotMetric::kTrajectoryPayoff: return "average payoff along trajectory";
  }
  return "";
}

const char* series_color(Algorithm algo) {
  switch (algo) {
    case Algorithm::kSbrd: return "#1f77b4";
    case Algorithm::kIndd: return "#2ca02c";
    case Algorithm::kSpgd: return "#d62728";
  }
  return "#000000";
}

bool point_for(const AggregateRow& row, PlotMetric metric, PlotPoint& pt) {
  pt.x = row.lambda;
  auto from_stat = [&pt](const std::optional<stats::SummaryStat>& s) {
    if (!s) return false;
    pt.y = s->mean;
    pt.lo = s->mean - 2.0 * s->se;
    pt.hi = s->mean + 2.0 * s->se;
    return true;
  };
  auto from_interval = [&pt](const stats::IntervalEstimate& e) {
    pt.y = e.point;
    pt.lo = e.lo;
    pt.hi = e.hi;
    return true;
  };
  switch (metric) {
    case PlotMetric::kTwoCycle: return from_interval(row.p_two_cycle);
    case PlotMetric::kNe: return from_interval(row.p_ne);
    case PlotMetric::kMeanSteps: return from_stat(row.steps);
    case PlotMetric::kMeanWall: return from_stat(row.wall_ns);
    case PlotMetric::kTerminalPayoff: return from_stat(row.terminal_payoff);
    case PlotMetric::kTrajectoryPayoff: return from_stat(row.trajectory_payoff);
  }
  return false;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, giving about `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r <= 1.0) return mag;
  if (r <= 2.0) return 2.0 * mag;
  if (r <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

std::vector<PlotSeries> build_series(const PlotSpec& spec,
                                     const std::vector<AggregateRow>& rows) {
  std::vector<Algorithm> wanted = spec.series;
  if (wanted.empty()) {
    for (const auto& r : rows) {
      if (std::find(wanted.begin(), wanted.end(), r.algorithm) == wanted.end()) {
        wanted.push_back(r.algorithm);
      }
    }
    std::sort(wanted.begin(), wanted.end());
  }
  if (wanted.empty()) throw std::invalid_argument("no data to plot");

  std::vector<PlotSeries> out;
  for (Algorithm algo : wanted) {
    PlotSeries s{algo, {}};
    for (const auto& r : rows) {
      PlotPoint pt;
      if (r.algorithm == algo && point_for(r, spec.metric, pt)) s.points.push_back(pt);
    }
    if (s.points.empty()) {
      throw std::invalid_argument(std::string("metric ") + plot_metric_name(spec.metric) +
                                  " has no values for series " + algorithm_name(algo));
    }
    std::sort(s.points.begin(), s.points.end(),
              [](const PlotPoint& a, const PlotPoint& b) { return a.x < b.x; });
    out.push_back(std::move(s));
  }
  return out;
}

bool wants_log_scale(const std::vector<PlotSeries>& series) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      if (!(p.y > 0.0)) return false;
      lo = std::min(lo, p.y);
      hi = std::max(hi, p.y);
    }
  }
  return hi / lo > 1e3;
}

std::string render_line_plot(const PlotSpec& spec,
                             const std::vector<AggregateRow>& rows) {
  const auto series = build_series(spec, rows);
  const bool log_y = !is_proportion(spec.metric) && wants_log_scale(series);

  constexpr double kWidth = 640, kHeight = 420;
  constexpr double kLeft = 80, kRight = 140, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min, y_pos_min = x_min;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      x_min = std::min(x_min, p.x);
      x_max = std::max(x_max, p.x);
      y_min = std::min({y_min, p.lo, p.y});
      y_max = std::max({y_max, p.hi, p.y});
      if (p.y > 0) y_pos_min = std::min(y_pos_min, p.y);
      if (p.lo > 0) y_pos_min = std::min(y_pos_min, p.lo);
    }
  }
  if (x_max - x_min < 1e-12) {
    x_min -= 0.05;
    x_max += 0.05;
  }
  if (is_proportion(spec.metric)) {
    y_min = 0.0;
    y_max = 1.0;
  }

  double lo_axis, hi_axis;
  if (log_y) {
    lo_axis = std::floor(std::log10(y_pos_min));
    hi_axis = std::ceil(std::log10(y_max));
    if (hi_axis <= lo_axis) hi_axis = lo_axis + 1;
  } else {
    if (y_max - y_min < 1e-12) {
      y_min -= 0.5;
      y_max += 0.5;
    }
    const double step = nice_step(y_max - y_min, 5);
    lo_axis = std::floor(y_min / step) * step;
    hi_axis = std::ceil(y_max / step) * step;
  }
  auto y_value = [&](double v) {
    if (log_y) return std::log10(std::max(v, std::pow(10.0, lo_axis)));
    return v;
  };
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double v) {
    return kTop + plot_h - (y_value(v) - lo_axis) / (hi_axis - lo_axis) * plot_h;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  const std::string title = spec.title.empty()
                                ? std::string(default_label(spec.metric)) + " vs lambda"
                                : spec.title;
  svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"24\" font-family=\"sans-serif\" "
      << "font-size=\"15\" text-anchor=\"middle\">" << xml_escape(title) << "</text>\n";

  // Axes and grid.
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" stroke-width=\"1\">\n";
  svg << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
      << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  const double x_step = nice_step(x_max - x_min, 5);
  for (double x = std::ceil(x_min / x_step - 1e-9) * x_step; x <= x_max + 1e-9; x += x_step) {
    svg << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\""
        << fmt(px(x)) << "\" y2=\"" << fmt(kTop + plot_h + 5) << "\" stroke=\"#333333\"/>\n"
        << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << tick_label(std::abs(x) < 1e-12 ? 0.0 : x)
        << "</text>\n";
  }
  if (log_y) {
    for (double d = lo_axis; d <= hi_axis + 1e-9; d += 1.0) {
      const double y = kTop + plot_h - (d - lo_axis) / (hi_axis - lo_axis) * plot_h;
      svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(y) << "\" x2=\""
          << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n"
          << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(y + 4)
          << "\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
    }
  } else {
    const double step = nice_step(hi_axis - lo_axis, 5);
    for (double v = lo_axis; v <= hi_axis + step * 1e-6; v += step) {
      const double y = py(v);
      svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(y) << "\" x2=\""
          << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n"
          << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(y + 4)
          << "\" text-anchor=\"end\">" << tick_label(std::abs(v) < 1e-12 ? 0.0 : v)
          << "</text>\n";
    }
  }
  svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 16)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(spec.x_label)
      << "</text>\n";
  const std::string y_label =
      spec.y_label.empty() ? default_label(spec.metric) : spec.y_label;
  svg << "<text x=\"20\" y=\"" << fmt(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
      << fmt(kTop + plot_h / 2) << ")\">" << xml_escape(y_label) << "</text>\n";
  svg << "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = series_color(s.algorithm);
    bool has_width = false;
    for (const auto& p : s.points) has_width = has_width || p.hi - p.lo > 0.0;

    svg << "<g id=\"series-" << algorithm_name(s.algorithm) << "\">\n";
    if (has_width && s.points.size() >= 2) {
      svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (const auto& p : s.points) svg << fmt(px(p.x)) << ',' << fmt(py(p.hi)) << ' ';
      for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
        svg << fmt(px(it->x)) << ',' << fmt(py(it->lo)) << ' ';
      }
      svg << "\"/>\n";
    } else if (has_width) {
      const auto& p = s.points.front();
      svg << "<line x1=\"" << fmt(px(p.x)) << "\" y1=\"" << fmt(py(p.lo)) << "\" x2=\""
          << fmt(px(p.x)) << "\" y2=\"" << fmt(py(p.hi)) << "\" stroke=\"" << color
          << "\" stroke-opacity=\"0.5\" stroke-width=\"3\"/>\n";
    }
    if (s.points.size() >= 2) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (const auto& p : s.points) svg << fmt(px(p.x)) << ',' << fmt(py(p.y)) << ' ';
      svg << "\"/>\n";
    }
    for (const auto& p : s.points) {
      svg << "<circle cx=\"" << fmt(px(p.x)) << "\" cy=\"" << fmt(py(p.y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 14 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << fmt(kLeft + plot_w + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << fmt(kLeft + plot_w + 36) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << fmt(kLeft + plot_w + 42) << "\" y=\"" << fmt(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << algorithm_name(s.algorithm)
        << "</text>\n";
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gamedyn
