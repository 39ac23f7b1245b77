#pragma once

#include <vector>

#include "omrc/numerics/types.hpp"

namespace omrc {

/// kAdaptive: threshold follows the saturated adaptation law.
/// kStatic:   fixed threshold (periodic event-triggered baseline).
/// kContinuous: no triggering; the controller sees x_hat(t) at all times.
/// Only the first two are meaningful for TriggerState.
enum class TriggerMode { kAdaptive, kStatic, kContinuous };

struct TriggerConfig {
  double period = 0.5;  // T1, spacing of the periodic check instants
  MatrixXd psi1;
  MatrixXd psi2;
  double rho_lo = 0.01;
  double rho_hi = 0.99;
  double rho0 = 0.01;
  double kappa = 0.01;
  TriggerMode mode = TriggerMode::kAdaptive;

  /// psi1 = psi2 = I_n with the default threshold parameters.
  static TriggerConfig with_identity_weights(Eigen::Index n);
  /// Throws ConfigError / InvalidBounds on invalid parameters.
  void validate(Eigen::Index n) const;
};

enum class TriggerDecision { kTransmit, kHold };

/// One periodic check, as evaluated.
struct TriggerCheck {
  double t = 0.0;
  double lhs = 0.0;        // eps_o^T psi1 eps_o before the decision
  double rhs = 0.0;        // rho x_hat^T psi2 x_hat
  double lhs_after = 0.0;  // eps_o^T psi1 eps_o after a possible reset
  double rho_before = 0.0;
  double rho_after = 0.0;
  TriggerDecision decision = TriggerDecision::kHold;
};

/// min(max(x, lo), hi); InvalidBounds if lo > hi.
double saturate(double x, double lo, double hi);

/// Adaptive periodic event-triggered channel for the observer state.
///
/// Conditions are evaluated only at multiples of T1. A transmission happens
/// when eps_o^T psi1 eps_o > rho x_hat^T psi2 x_hat with eps_o = held - x_hat.
/// The construction instant counts as the first transmission.
class TriggerState {
 public:
  TriggerState(TriggerConfig config, VectorXd initial_held, double t0 = 0.0);

  /// NotOnGrid if t is not an integer multiple of T1.
  TriggerDecision check_and_update(const VectorXd& x_hat_now, double t);

  /// rho <- Sat[rho + kappa (held^T psi1 held - last^T psi2 last)].
  double update_threshold();

  const VectorXd& held_value() const { return held_; }
  const VectorXd& last_checked() const { return last_checked_; }
  double threshold() const { return rho_; }
  const TriggerConfig& config() const { return config_; }
  const std::vector<double>& event_log() const { return events_; }
  const std::vector<TriggerCheck>& checks() const { return checks_; }

 private:
  double quad(const MatrixXd& w, const VectorXd& v) const { return v.dot(w * v); }

  TriggerConfig config_;
  VectorXd held_;
  VectorXd last_checked_;
  double rho_;
  std::vector<double> events_;
  std::vector<TriggerCheck> checks_;
};

}  // namespace omrc
