#include "omrc/analysis_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace omrc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool in_window(double t, const TimeWindow& w) {
  const double slack = 1e-9 * std::max(1.0, std::abs(w.end));
  return t >= w.start - slack && t <= w.end + slack;
}

struct VectorColumn {
  const char* name;
  MatrixXd Trace::*field;
};

constexpr VectorColumn kVectorColumns[] = {
    {"u", &Trace::u},         {"u_f", &Trace::u_f},     {"omega", &Trace::omega},
    {"omega_hat", &Trace::omega_hat}, {"omega_tilde", &Trace::omega_tilde},
    {"x", &Trace::x},         {"x_hat", &Trace::x_hat}, {"x_held", &Trace::x_held},
};

struct ScalarColumn {
  const char* name;
  std::vector<double> Trace::*field;
};

constexpr ScalarColumn kScalarColumns[] = {
    {"t", &Trace::t},     {"y", &Trace::y},     {"y_r", &Trace::y_r}, {"eps", &Trace::eps},
    {"v", &Trace::v},     {"x_a", &Trace::x_a}, {"rho", &Trace::rho},
};

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw_error(ErrorKind::kIoError, "malformed number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

nlohmann::json number_or_null(double value) {
  return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

double safe_ratio(double numerator, double denominator) {
  if (std::isnan(numerator) || std::isnan(denominator)) return kNaN;
  if (denominator == 0.0) return numerator == 0.0 ? 1.0 : kNaN;
  return numerator / denominator;
}

MetricsReport compute_metrics(const Trace& trace, TimeWindow window) {
  if (window.start > window.end) throw_error(ErrorKind::kEmptyWindow, "window start after end");
  MetricsReport report;
  report.window = window;
  double sum_sq = 0.0;
  double sum_abs = 0.0;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    if (!in_window(trace.t[k], window)) continue;
    const double e = trace.eps[k];
    sum_sq += e * e;
    sum_abs += std::abs(e);
    report.max_abs_error = std::max(report.max_abs_error, std::abs(e));
    ++report.samples;
  }
  if (report.samples == 0) throw_error(ErrorKind::kEmptyWindow, "no samples inside the window");
  const auto count = static_cast<double>(report.samples);
  report.mse = sum_sq / count;
  report.rmse = std::sqrt(report.mse);
  report.mae = sum_abs / count;

  std::vector<double> events;
  for (double t : trace.event_log) {
    if (in_window(t, window)) events.push_back(t);
  }
  report.event_count = events.size();
  if (events.size() >= 2) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    for (std::size_t i = 1; i < events.size(); ++i) {
      const double gap = events[i] - events[i - 1];
      lo = std::min(lo, gap);
      hi = std::max(hi, gap);
      sum += gap;
    }
    report.min_interval = lo;
    report.max_interval = hi;
    report.mean_interval = sum / static_cast<double>(events.size() - 1);
  }
  return report;
}

MetricsReport compute_metrics(const Trace& trace) {
  if (trace.t.empty()) throw_error(ErrorKind::kEmptyWindow, "empty trace");
  return compute_metrics(trace, {trace.t.front(), trace.t.back()});
}

double realized_cost(const Trace& trace, const MatrixXd& q_z, const MatrixXd& r) {
  const Eigen::Index n = trace.x.cols();
  require_shape(q_z, n + 2, n + 2, "Q_z");
  require_shape(r, trace.u.cols(), trace.u.cols(), "R");
  const auto samples = trace.t.size();
  if (samples < 2) return 0.0;
  VectorXd z(n + 2);
  auto integrand = [&](std::size_t k) {
    const auto row = static_cast<Eigen::Index>(k);
    z.head(n) = trace.x.row(row).transpose();
    z(n) = trace.eps[k];
    z(n + 1) = trace.x_a[k];
    const VectorXd u = trace.u.row(row).transpose();
    return z.dot(q_z * z) + u.dot(r * u);
  };
  double total = 0.0;
  double previous = integrand(0);
  for (std::size_t k = 1; k < samples; ++k) {
    const double current = integrand(k);
    total += 0.5 * (previous + current) * (trace.t[k] - trace.t[k - 1]);
    previous = current;
  }
  return 0.5 * total;
}

std::vector<std::string> csv_columns(const Trace& trace) {
  std::vector<std::string> names;
  for (const auto& col : kScalarColumns) names.emplace_back(col.name);
  names.emplace_back("event");
  for (const auto& col : kVectorColumns) {
    for (Eigen::Index i = 0; i < (trace.*col.field).cols(); ++i) {
      names.push_back(std::string(col.name) + "_" + std::to_string(i + 1));
    }
  }
  return names;
}

void export_csv(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorKind::kIoError, "cannot open " + path.string() + " for writing");
  const auto names = csv_columns(trace);
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  std::string line;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    line.clear();
    for (const auto& col : kScalarColumns) {
      line += format_number((trace.*col.field)[k]);
      line += ',';
    }
    line += trace.event[k] ? '1' : '0';
    for (const auto& col : kVectorColumns) {
      const MatrixXd& m = trace.*col.field;
      for (Eigen::Index i = 0; i < m.cols(); ++i) {
        line += ',';
        line += format_number(m(static_cast<Eigen::Index>(k), i));
      }
    }
    line += '\n';
    out << line;
  }
  if (!out) throw_error(ErrorKind::kIoError, "write failed for " + path.string());
}

Trace import_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::kIoError, "cannot open " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw_error(ErrorKind::kIoError, "missing CSV header");
  const auto names = split(header);

  // Column index per scalar field / per (vector field, component).
  std::map<std::string, std::size_t> scalar_index;
  std::map<std::string, std::vector<std::size_t>> vector_index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string name(names[i]);
    const auto underscore = name.rfind('_');
    bool is_vector = false;
    if (underscore != std::string::npos && underscore + 1 < name.size() &&
        std::all_of(name.begin() + static_cast<std::ptrdiff_t>(underscore) + 1, name.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      const std::string prefix = name.substr(0, underscore);
      for (const auto& col : kVectorColumns) {
        if (prefix == col.name) {
          vector_index[prefix].push_back(i);
          is_vector = true;
        }
      }
    }
    if (!is_vector) scalar_index[name] = i;
  }
  for (const auto& col : kScalarColumns) {
    if (!scalar_index.count(col.name)) throw_error(ErrorKind::kIoError, std::string("missing column ") + col.name);
  }
  if (!scalar_index.count("event")) throw_error(ErrorKind::kIoError, "missing column event");

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != names.size()) throw_error(ErrorKind::kIoError, "ragged CSV row");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto field : fields) row.push_back(parse_double(field));
    rows.push_back(std::move(row));
  }

  Trace trace;
  const auto samples = static_cast<Eigen::Index>(rows.size());
  auto dim = [&](const char* name) {
    const auto it = vector_index.find(name);
    return it == vector_index.end() ? Eigen::Index{0} : static_cast<Eigen::Index>(it->second.size());
  };
  trace.resize(samples, dim("x"), dim("u"), dim("omega"));
  for (const auto& col : kVectorColumns) {
    (trace.*col.field).resize(samples, dim(col.name));
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (const auto& col : kScalarColumns) (trace.*col.field)[k] = rows[k][scalar_index[col.name]];
    trace.event[k] = rows[k][scalar_index["event"]] != 0.0 ? 1 : 0;
    if (trace.event[k]) trace.event_log.push_back(trace.t[k]);
    for (const auto& col : kVectorColumns) {
      const auto it = vector_index.find(col.name);
      if (it == vector_index.end()) continue;
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        (trace.*col.field)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = rows[k][it->second[i]];
      }
    }
  }
  if (trace.t.size() >= 2) trace.step = trace.t[1] - trace.t[0];
  return trace;
}

nlohmann::json to_json(const MetricsReport& report) {
  return {
      {"rmse", report.rmse},
      {"mse", report.mse},
      {"mae", report.mae},
      {"max_abs_error", report.max_abs_error},
      {"realized_cost", number_or_null(report.realized_cost)},
      {"samples", report.samples},
      {"event_count", report.event_count},
      {"min_interval", number_or_null(report.min_interval)},
      {"mean_interval", number_or_null(report.mean_interval)},
      {"max_interval", number_or_null(report.max_interval)},
      {"window", {report.window.start, report.window.end}},
  };
}

Comparison compare_runs(const std::vector<LabeledReport>& reports) {
  if (reports.size() < 2) throw_error(ErrorKind::kConfigError, "comparison needs at least two runs");
  Comparison out;
  out.json["runs"] = nlohmann::json::array();
  for (const auto& entry : reports) {
    nlohmann::json row = to_json(entry.report);
    row["label"] = entry.label;
    out.json["runs"].push_back(row);
  }
  out.json["ratios"] = nlohmann::json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (std::size_t j = i + 1; j < reports.size(); ++j) {
      const auto& a = reports[i].report;
      const auto& b = reports[j].report;
      out.json["ratios"].push_back({
          {"numerator", reports[j].label},
          {"denominator", reports[i].label},
          {"rmse", number_or_null(safe_ratio(b.rmse, a.rmse))},
          {"mse", number_or_null(safe_ratio(b.mse, a.mse))},
          {"mae", number_or_null(safe_ratio(b.mae, a.mae))},
          {"realized_cost", number_or_null(safe_ratio(b.realized_cost, a.realized_cost))},
          {"event_count", number_or_null(safe_ratio(static_cast<double>(b.event_count),
                                                    static_cast<double>(a.event_count)))},
          {"min_interval", number_or_null(safe_ratio(b.min_interval, a.min_interval))},
      });
    }
  }
  auto published = [](const PublishedIndices& p) {
    return nlohmann::json{{"rmse", p.rmse}, {"mse", p.mse}, {"mae", p.mae}};
  };
  out.json["published_baseline"] = published(kPublishedBaseline);
  out.json["published_proposed"] = published(kPublishedProposed);

  std::ostringstream text;
  auto cell = [&](const std::string& s) {
    text << s;
    for (std::size_t pad = s.size(); pad < 26; ++pad) text << ' ';
  };
  cell("label");
  for (const char* h : {"rmse", "mse", "mae", "cost", "events", "min_interval"}) cell(h);
  text << '\n';
  for (const auto& entry : reports) {
    const auto& r = entry.report;
    cell(entry.label);
    cell(format_number(r.rmse));
    cell(format_number(r.mse));
    cell(format_number(r.mae));
    cell(format_number(r.realized_cost));
    cell(std::to_string(r.event_count));
    cell(format_number(r.min_interval));
    text << '\n';
  }
  for (const auto& [label, p] : {std::pair{"published_baseline", kPublishedBaseline},
                                 std::pair{"published_proposed", kPublishedProposed}}) {
    cell(label);
    cell(format_number(p.rmse));
    cell(format_number(p.mse));
    cell(format_number(p.mae));
    text << '\n';
  }
  text << "\nratios (numerator / denominator):\n";
  for (const auto& ratio : out.json["ratios"]) {
    text << "  " << ratio["numerator"].get<std::string>() << " / "
         << ratio["denominator"].get<std::string>() << ":";
    for (const char* key : {"rmse", "mse", "mae", "realized_cost", "event_count", "min_interval"}) {
      text << ' ' << key << '=' << (ratio[key].is_null() ? "n/a" : format_number(ratio[key].get<double>()));
    }
    text << '\n';
  }
  out.text = text.str();
  return out;
}

}  // namespace omrc
