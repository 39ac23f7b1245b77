#pragma once

#include "omrc/numerics/history_buffer.hpp"

namespace omrc {

/// Modified repetitive controller: first-order low-pass l(s) = w_a / (s + w_a)
/// inside a positive-feedback delay loop of period T.
///
///   x_a' = -w_a x_a(t) + w_a x_a(t - T) + w_a eps(t)
///   v    = x_a(t - T) + eps(t)
struct MrcState {
  /// History of x_a on a grid of `step`, zero for t <= 0.
  MrcState(double w_a, double period, double step);

  /// Appends the current x_a as the sample for the next grid time.
  void record() { history.push(VectorXd::Constant(1, x_a)); }
  double delayed(double t) const { return history.sample(t - period)(0); }

  double x_a = 0.0;
  double w_a;
  double period;
  HistoryBuffer<double> history;
};

inline double mrc_derivative(double w_a, double x_a, double x_a_delayed, double eps) {
  return -w_a * x_a + w_a * x_a_delayed + w_a * eps;
}

inline double mrc_output(double x_a_delayed, double eps) { return x_a_delayed + eps; }

/// Throws OutOfRange if the history does not cover t - T.
double mrc_derivative(const MrcState& state, double eps, double t);
double mrc_output(const MrcState& state, double eps, double t);

inline double tracking_error(double y_r, double y) { return y_r - y; }

}  // namespace omrc
