#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "omrc/analysis_io.hpp"

namespace omrc {
namespace {

Trace make_trace(const std::vector<double>& eps, double step = 0.1) {
  Trace trace;
  trace.step = step;
  trace.resize(static_cast<Eigen::Index>(eps.size()), 3, 1, 1);
  for (std::size_t k = 0; k < eps.size(); ++k) {
    trace.t[k] = static_cast<double>(k) * step;
    trace.eps[k] = eps[k];
  }
  return trace;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("omrc_" + std::to_string(::getpid()) + "_" + name);
}

TEST(MetricsTest, Examples) {
  const MetricsReport zero = compute_metrics(make_trace({0, 0, 0}));
  EXPECT_EQ(zero.rmse, 0.0);
  EXPECT_EQ(zero.mse, 0.0);
  EXPECT_EQ(zero.mae, 0.0);

  const MetricsReport pm = compute_metrics(make_trace({1, -1}));
  EXPECT_EQ(pm.rmse, 1.0);
  EXPECT_EQ(pm.mse, 1.0);
  EXPECT_EQ(pm.mae, 1.0);

  const MetricsReport r = compute_metrics(make_trace({3, 4}));
  EXPECT_EQ(r.mse, 12.5);
  EXPECT_NEAR(r.rmse, 3.53553, 1e-5);
  EXPECT_EQ(r.mae, 3.5);
  EXPECT_EQ(r.max_abs_error, 4.0);
  EXPECT_EQ(r.samples, 2u);
}

TEST(MetricsTest, MatchesBruteForceOracle) {
  std::mt19937 rng(99);
  std::normal_distribution<> g(0, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> eps(10000);
    for (double& e : eps) e = g(rng) + (trial % 3) * 1e3;
    // Kahan-compensated long double sums as the reference.
    long double sq = 0, sq_c = 0, ab = 0, ab_c = 0;
    for (double e : eps) {
      const long double y1 = static_cast<long double>(e) * e - sq_c;
      const long double t1 = sq + y1;
      sq_c = (t1 - sq) - y1;
      sq = t1;
      const long double y2 = std::fabs(static_cast<long double>(e)) - ab_c;
      const long double t2 = ab + y2;
      ab_c = (t2 - ab) - y2;
      ab = t2;
    }
    const double mse = static_cast<double>(sq / eps.size());
    const double mae = static_cast<double>(ab / eps.size());
    const MetricsReport r = compute_metrics(make_trace(eps, 1e-3));
    EXPECT_NEAR(r.mse, mse, 1e-12 * mse);
    EXPECT_NEAR(r.mae, mae, 1e-12 * mae);
    EXPECT_NEAR(r.rmse, std::sqrt(mse), 1e-12 * std::sqrt(mse));
    EXPECT_EQ(r.rmse, std::sqrt(r.mse));
    EXPECT_NEAR(r.rmse * r.rmse, r.mse, 1e-12 * r.mse);
    EXPECT_LE(r.mae, r.rmse);
  }
}

TEST(MetricsTest, WindowAndEvents) {
  Trace trace = make_trace({5, 1, 2, 3, 9}, 0.5);
  trace.event_log = {0.0, 0.5, 1.5, 2.0};
  const MetricsReport r = compute_metrics(trace, {0.5, 1.5});
  EXPECT_EQ(r.samples, 3u);
  EXPECT_EQ(r.max_abs_error, 3.0);
  EXPECT_EQ(r.event_count, 2u);
  EXPECT_EQ(r.min_interval, 1.0);

  const MetricsReport full = compute_metrics(trace);
  EXPECT_EQ(full.event_count, 4u);
  EXPECT_EQ(full.min_interval, 0.5);
  EXPECT_EQ(full.max_interval, 1.0);
  EXPECT_NEAR(full.mean_interval, 2.0 / 3.0, 1e-15);

  EXPECT_TRUE(std::isnan(compute_metrics(trace, {2.0, 2.0}).min_interval));
  try {
    compute_metrics(trace, {7.0, 8.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyWindow);
  }
}

TEST(RealizedCostTest, Examples) {
  const MatrixXd q = MatrixXd::Identity(5, 5);
  const MatrixXd r = MatrixXd::Identity(1, 1);
  Trace trace = make_trace(std::vector<double>(21, 0.0), 0.1);
  EXPECT_EQ(realized_cost(trace, q, r), 0.0);
  trace.u.setOnes();
  EXPECT_NEAR(realized_cost(trace, q, r), 1.0, 1e-12);
}

TEST(RealizedCostTest, QuadraticHomogeneity) {
  std::mt19937 rng(5);
  std::normal_distribution<> g(0, 1);
  Trace trace = make_trace(std::vector<double>(50, 0.0), 0.02);
  for (std::size_t k = 0; k < 50; ++k) {
    trace.eps[k] = g(rng);
    trace.x_a[k] = g(rng);
  }
  trace.x = MatrixXd::NullaryExpr(50, 3, [&] { return g(rng); });
  trace.u = MatrixXd::NullaryExpr(50, 1, [&] { return g(rng); });
  VectorXd d(5);
  d << 100, 100, 100, 20000, 0.001;
  const MatrixXd q = d.asDiagonal();
  const MatrixXd r = MatrixXd::Identity(1, 1);
  const double base = realized_cost(trace, q, r);
  EXPECT_GE(base, 0.0);
  for (std::size_t k = 0; k < 50; ++k) {
    trace.eps[k] *= 2;
    trace.x_a[k] *= 2;
  }
  trace.x *= 2;
  trace.u *= 2;
  EXPECT_NEAR(realized_cost(trace, q, r), 4.0 * base, 1e-9 * 4.0 * base);
}

TEST(CsvTest, ZeroTrace) {
  const Trace trace = make_trace({0, 0, 0}, 0.0);
  const auto path = temp_path("zero.csv");
  export_csv(trace, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("t,y,y_r,eps", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) EXPECT_EQ(cell, "0");
  }
  EXPECT_EQ(rows, 3);
  std::filesystem::remove(path);
}

TEST(CsvTest, RoundTripIsBitExact) {
  std::mt19937 rng(12);
  std::normal_distribution<> g(0, 1);
  Trace trace = make_trace(std::vector<double>(40, 0.0), 0.125);
  for (auto* column : {&trace.y, &trace.y_r, &trace.eps, &trace.v, &trace.x_a, &trace.rho}) {
    for (double& value : *column) value = g(rng) * std::pow(10.0, std::uniform_int_distribution<>(-30, 30)(rng));
  }
  for (auto* m : {&trace.u, &trace.u_f, &trace.omega, &trace.omega_hat, &trace.omega_tilde, &trace.x,
                  &trace.x_hat, &trace.x_held}) {
    *m = m->unaryExpr([&](double) { return g(rng) / 3.0; });
  }
  trace.event[0] = trace.event[8] = trace.event[20] = 1;
  trace.event_log = {0.0, 1.0, 2.5};
  const auto path = temp_path("rt.csv");
  export_csv(trace, path);
  const Trace back = import_csv(path);
  EXPECT_TRUE(identical(trace, back));
  EXPECT_EQ(back.step, 0.125);
  std::filesystem::remove(path);
}

TEST(CsvTest, Errors) {
  EXPECT_THROW(export_csv(make_trace({0}), "/nonexistent_dir/x.csv"), Error);
  EXPECT_THROW(import_csv("/nonexistent_dir/x.csv"), Error);
}

TEST(CompareTest, IdenticalReportsGiveUnitRatios) {
  Trace trace = make_trace({0.1, -0.2, 0.3});
  trace.event_log = {0.0, 0.1};
  MetricsReport r = compute_metrics(trace);
  r.realized_cost = 2.0;
  const Comparison c = compare_runs({{"adaptive", r}, {"adaptive", r}});
  for (const auto& ratio : c.json["ratios"]) {
    for (const char* key : {"rmse", "mse", "mae", "realized_cost", "event_count", "min_interval"}) {
      EXPECT_EQ(ratio[key].get<double>(), 1.0) << key;
    }
  }
  EXPECT_EQ(c.json["published_baseline"]["rmse"].get<double>(), 0.3950);
  EXPECT_EQ(c.json["published_baseline"]["mse"].get<double>(), 0.1561);
  EXPECT_EQ(c.json["published_baseline"]["mae"].get<double>(), 0.1212);
  EXPECT_NE(c.text.find("published_baseline"), std::string::npos);
  EXPECT_THROW(compare_runs({{"one", r}}), Error);
}

TEST(CompareTest, SafeRatio) {
  EXPECT_EQ(safe_ratio(0.0, 0.0), 1.0);
  EXPECT_EQ(safe_ratio(3.0, 1.5), 2.0);
  EXPECT_TRUE(std::isnan(safe_ratio(1.0, 0.0)));
}

TEST(JsonTest, NanBecomesNull) {
  const MetricsReport r = compute_metrics(make_trace({1.0}));
  const nlohmann::json j = to_json(r);
  EXPECT_TRUE(j["realized_cost"].is_null());
  EXPECT_TRUE(j["min_interval"].is_null());
  EXPECT_EQ(j["rmse"].get<double>(), 1.0);
}

}  // namespace
}  // namespace omrc
