#pragma once

#include "omrc/plant.hpp"

namespace omrc {

/// Equivalent-input-disturbance estimator with its low-pass shaping filter
///   x_f' = A_f x_f + B_f w_hat,   w_tilde = C_f x_f.
///
/// The estimate w_hat = B+ L (y - y_hat) + u_f - u is evaluated with
/// u = u_f - w_tilde substituted, i.e. w_hat = B+ L (y - y_hat) + w_tilde.
struct EidState {
  VectorXd x_f;
  MatrixXd a_f;
  MatrixXd b_f;
  MatrixXd c_f;
  MatrixXd b_plus;  // (B^T B)^{-1} B^T
  bool enabled = true;

  VectorXd filtered() const { return c_f * x_f; }
};

/// Per-channel f(s) = w_f / (s + w_f): A_f = -w_f I, B_f = w_f I, C_f = I.
EidState make_eid(const MatrixXd& b, double w_f, bool enabled = true);

/// General realization; checks A_f Hurwitz and B+ B = I.
EidState make_eid(const MatrixXd& b, MatrixXd a_f, MatrixXd b_f, MatrixXd c_f, bool enabled = true);

VectorXd eid_estimate(const EidState& eid, const MatrixXd& gain, const VectorXd& y,
                      const VectorXd& y_hat, const VectorXd& w_tilde);

VectorXd eid_filter_derivative(const EidState& eid, const VectorXd& w_hat);

/// u_f - w_tilde when enabled, u_f otherwise.
VectorXd total_control(const VectorXd& u_f, const EidState& eid);

}  // namespace omrc
