#include "omrc/apetm.hpp"

#include <cmath>

namespace omrc {
namespace {

void require_spd(const MatrixXd& m, Eigen::Index n, const char* name) {
  require_shape(m, n, n, name);
  if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm())) {
    throw_error(ErrorKind::kConfigError, std::string(name) + " must be symmetric");
  }
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw_error(ErrorKind::kConfigError, std::string(name) + " must be positive definite");
  }
}

}  // namespace

TriggerConfig TriggerConfig::with_identity_weights(Eigen::Index n) {
  TriggerConfig config;
  config.psi1 = MatrixXd::Identity(n, n);
  config.psi2 = MatrixXd::Identity(n, n);
  return config;
}

void TriggerConfig::validate(Eigen::Index n) const {
  if (!(period > 0.0)) throw_error(ErrorKind::kConfigError, "T1 must be positive");
  if (!(rho_lo > 0.0 && rho_lo <= rho_hi && rho_hi < 1.0)) {
    throw_error(ErrorKind::kInvalidBounds, "threshold bounds need 0 < rho_lo <= rho_hi < 1");
  }
  if (!(rho0 >= rho_lo && rho0 <= rho_hi)) {
    throw_error(ErrorKind::kInvalidBounds, "rho0 must lie within [rho_lo, rho_hi]");
  }
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw_error(ErrorKind::kConfigError, "kappa must be >= 0");
  require_spd(psi1, n, "psi1");
  require_spd(psi2, n, "psi2");
}

double saturate(double x, double lo, double hi) {
  if (lo > hi) throw_error(ErrorKind::kInvalidBounds, "saturation needs lo <= hi");
  return std::min(std::max(x, lo), hi);
}

TriggerState::TriggerState(TriggerConfig config, VectorXd initial_held, double t0)
    : config_(std::move(config)),
      held_(std::move(initial_held)),
      last_checked_(held_),
      rho_(config_.rho0) {
  if (config_.mode == TriggerMode::kContinuous) {
    throw_error(ErrorKind::kConfigError, "continuous mode bypasses the trigger channel");
  }
  config_.validate(held_.size());
  require_finite(held_, "initial held sample");
  events_.push_back(t0);
}

TriggerDecision TriggerState::check_and_update(const VectorXd& x_hat_now, double t) {
  require_shape(x_hat_now, held_.size(), 1, "x_hat");
  require_finite(x_hat_now, "x_hat");
  const double ratio = t / config_.period;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw_error(ErrorKind::kNotOnGrid, "trigger check at t = " + std::to_string(t) +
                                           " is not a multiple of T1");
  }

  TriggerCheck check;
  check.t = t;
  check.rho_before = rho_;
  const VectorXd eps_o = held_ - x_hat_now;
  check.lhs = quad(config_.psi1, eps_o);
  check.rhs = rho_ * quad(config_.psi2, x_hat_now);
  if (check.lhs > check.rhs) {
    check.decision = TriggerDecision::kTransmit;
    held_ = x_hat_now;
    events_.push_back(t);
  }
  check.lhs_after = quad(config_.psi1, VectorXd(held_ - x_hat_now));
  last_checked_ = x_hat_now;
  if (config_.mode == TriggerMode::kAdaptive) update_threshold();
  check.rho_after = rho_;
  checks_.push_back(check);
  return check.decision;
}

double TriggerState::update_threshold() {
  const double increment =
      config_.kappa * (quad(config_.psi1, held_) - quad(config_.psi2, last_checked_));
  rho_ = saturate(rho_ + increment, config_.rho_lo, config_.rho_hi);
  return rho_;
}

}  // namespace omrc
