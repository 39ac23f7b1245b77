#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "omrc/apetm.hpp"
#include "omrc/synthesis.hpp"

namespace omrc {

struct PreviewConfig {
  double t_r = 0.0;  // preview horizon; 0 disables the feedforward
  double quad_step = 1e-3;
};

/// Everything needed for one deterministic closed-loop run.
///
/// The step must divide the MRC period, the trigger period T1 and the
/// horizon exactly; validate() enforces this.
struct Scenario {
  LtiPlant plant;
  GainSet gains;  // k_p, k_c, observer L; riccati only needed for preview
  std::optional<AugmentedSystem> augmented;  // required when preview.t_r > 0
  MatrixXd control_weight = MatrixXd::Identity(1, 1);  // R, for the preview kernel

  double w_a = 100.0;
  double period = 2.0;
  double w_f = 100.0;
  bool eid_enabled = true;
  TriggerConfig trigger;
  SignalSpec reference;
  std::vector<SignalSpec> disturbance;  // one per disturbance channel

  double horizon = 25.0;
  double step = 1e-4;
  PreviewConfig preview;
  double divergence_bound = 1e9;

  void validate() const;
  Eigen::Index steps() const;
};

/// Time-indexed record of every loop signal. Row k of each matrix is the
/// sample at t = k * step; vector signals occupy one column per component.
struct Trace {
  double step = 0.0;
  std::vector<double> t;
  std::vector<double> y, y_r, eps, v, x_a, rho;
  std::vector<int> event;  // 1 at transmission instants
  MatrixXd u, u_f, omega, omega_hat, omega_tilde;
  MatrixXd x, x_hat, x_held;
  std::vector<double> event_log;
  std::vector<TriggerCheck> checks;

  Eigen::Index size() const { return static_cast<Eigen::Index>(t.size()); }
  void resize(Eigen::Index samples, Eigen::Index n, Eigen::Index m, Eigen::Index l);
};

/// Bitwise equality of every recorded sample and of the event log.
bool identical(const Trace& a, const Trace& b);

/// Integrates (x, x_hat, x_a, x_f) with RK4 at the scenario step.
///
/// At each grid time t the loop is evaluated as
///   1. y = C x, y_hat = C x_hat, eps = y_r(t) - y
///   2. v = x_a(t - T) + eps; at multiples of T1 the trigger check runs first
///   3. u_f = k_p x_held + k_c v + f1
///   4. w_tilde = C_f x_f; u = u_f - w_tilde (EID on); w_hat = B+ L (y - y_hat) + w_tilde
///   5. RK4 advance with x_held frozen over the step
/// Inside the RK4 stages exogenous signals are evaluated at the stage time and
/// the delayed x_a is interpolated linearly between its two grid neighbours.
/// In continuous mode the controller uses the stage value of x_hat.
///
/// Throws Diverged when a state leaves the divergence bound or goes non-finite.
Trace run_scenario(const Scenario& scenario);

/// Coefficient blocks of the delay-free augmented closed-loop description,
/// plus Hurwitz reports for the observer-error and EID-filter blocks.
struct AnalysisBlocks {
  MatrixXd a_minus_b_kc_c;
  MatrixXd b_kc;
  MatrixXd b_kp;
  MatrixXd minus_b_cf;
  MatrixXd a_minus_lc;
  double minus_wa = 0.0;
  double wa = 0.0;
  MatrixXd minus_wa_c;
  MatrixXd af_plus_bf_cf;
  MatrixXd bf_bplus_lc;
  bool observer_hurwitz = false;
  bool filter_hurwitz = false;
  std::vector<std::complex<double>> observer_spectrum;
  std::vector<std::complex<double>> filter_spectrum;
};

AnalysisBlocks build_analysis_matrices(const Scenario& scenario);

}  // namespace omrc
