#ifndef GAMEDYN_PLOT_H_
#define GAMEDYN_PLOT_H_

#include <string>
#include <string_view>
#include <vector>

#include "gamedyn/experiment.h"

namespace gamedyn {

enum class PlotMetric {
  kTwoCycle,
  kNe,
  kMeanSteps,
  kMeanWall,
  kTerminalPayoff,
  kTrajectoryPayoff,
};

PlotMetric parse_plot_metric(std::string_view name);
const char* plot_metric_name(PlotMetric metric);
bool is_proportion(PlotMetric metric);

struct PlotSpec {
  std::string input_csv;
  PlotMetric metric = PlotMetric::kNe;
  // Empty selects every algorithm present in the data.
  std::vector<Algorithm> series;
  std::string x_label = "lambda";
  std::string y_label;
  std::string title;
  std::string output_path;
};

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct PlotSeries {
  Algorithm algorithm = Algorithm::kSbrd;
  std::vector<PlotPoint> points;
};

// Points per series: Clopper-Pearson bounds for proportions, mean +/- 2 SE
// otherwise. Throws std::invalid_argument when a selected series has no
// values for the metric.
std::vector<PlotSeries> build_series(const PlotSpec& spec,
                                     const std::vector<AggregateRow>& rows);

// True when every value is positive and the data spans more than 3 decades.
bool wants_log_scale(const std::vector<PlotSeries>& series);

// Standalone SVG 1.1 line chart with shaded interval bands.
std::string render_line_plot(const PlotSpec& spec,
                             const std::vector<AggregateRow>& rows);

}  // namespace gamedyn

#endif  // GAMEDYN_PLOT_H_
