#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "omrc/sim_engine.hpp"

namespace omrc {

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;
};

/// Tracking-error indices over a window plus inter-event statistics.
/// Interval statistics are NaN when fewer than two events fall inside the
/// window; realized_cost is NaN until filled in by the caller.
struct MetricsReport {
  double rmse = 0.0;
  double mse = 0.0;
  double mae = 0.0;
  double max_abs_error = 0.0;
  double realized_cost = std::numeric_limits<double>::quiet_NaN();
  std::size_t samples = 0;
  std::size_t event_count = 0;
  double min_interval = std::numeric_limits<double>::quiet_NaN();
  double mean_interval = std::numeric_limits<double>::quiet_NaN();
  double max_interval = std::numeric_limits<double>::quiet_NaN();
  TimeWindow window;
};

/// RMSE = sqrt(mean eps^2), MSE = mean eps^2, MAE = mean |eps| over the grid
/// samples with t in [start, end]. EmptyWindow if no sample qualifies.
MetricsReport compute_metrics(const Trace& trace, TimeWindow window);
MetricsReport compute_metrics(const Trace& trace);

/// 0.5 * int (z^T Q z + u^T R u) dt by the trapezoidal rule, with
/// z = (x, eps, x_a) assembled from the recorded signals.
double realized_cost(const Trace& trace, const MatrixXd& q_z, const MatrixXd& r);

/// CSV with one header row and one row per grid step, 17 significant digits.
void export_csv(const Trace& trace, const std::filesystem::path& path);
Trace import_csv(const std::filesystem::path& path);
std::vector<std::string> csv_columns(const Trace& trace);

nlohmann::json to_json(const MetricsReport& report);

struct LabeledReport {
  std::string label;
  MetricsReport report;
};

struct Comparison {
  nlohmann::json json;
  std::string text;
};

/// Published indices used as fixed comparison rows.
struct PublishedIndices {
  double rmse;
  double mse;
  double mae;
};
inline constexpr PublishedIndices kPublishedBaseline{0.3950, 0.1561, 0.1212};
inline constexpr PublishedIndices kPublishedProposed{0.1157, 0.0134, 0.0295};

/// Side-by-side table and pairwise ratios (later run over earlier run) for
/// rmse/mse/mae/cost/event count/min interval. Needs at least two reports.
Comparison compare_runs(const std::vector<LabeledReport>& reports);

/// Ratio with 0/0 defined as 1; NaN when undefined.
double safe_ratio(double numerator, double denominator);

/// "%.17g"-style formatting used for every numeric text output.
std::string format_number(double value);

}  // namespace omrc
