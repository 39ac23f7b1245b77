#include "omrc/eid.hpp"

#include "omrc/numerics/linalg.hpp"

namespace omrc {

EidState make_eid(const MatrixXd& b, double w_f, bool enabled) {
  if (!(w_f > 0.0)) throw_error(ErrorKind::kConfigError, "w_f must be positive");
  const Eigen::Index m = b.cols();
  return make_eid(b, -w_f * MatrixXd::Identity(m, m), w_f * MatrixXd::Identity(m, m),
                  MatrixXd::Identity(m, m), enabled);
}

EidState make_eid(const MatrixXd& b, MatrixXd a_f, MatrixXd b_f, MatrixXd c_f, bool enabled) {
  require_square(a_f, "A_f");
  const Eigen::Index m = b.cols();
  require_shape(b_f, a_f.rows(), m, "B_f");
  require_shape(c_f, m, a_f.rows(), "C_f");
  if (!is_hurwitz(a_f)) throw_error(ErrorKind::kConfigError, "EID filter A_f is not Hurwitz");
  EidState eid;
  eid.x_f = VectorXd::Zero(a_f.rows());
  eid.a_f = std::move(a_f);
  eid.b_f = std::move(b_f);
  eid.c_f = std::move(c_f);
  eid.b_plus = left_pseudo_inverse<double>(b);
  eid.enabled = enabled;
  return eid;
}

VectorXd eid_estimate(const EidState& eid, const MatrixXd& gain, const VectorXd& y,
                      const VectorXd& y_hat, const VectorXd& w_tilde) {
  require_shape(gain, eid.b_plus.cols(), y.size(), "L");
  if (y.size() != y_hat.size()) throw_error(ErrorKind::kDimensionMismatch, "y and y_hat sizes differ");
  require_shape(w_tilde, eid.b_plus.rows(), 1, "w_tilde");
  return eid.b_plus * (gain * (y - y_hat)) + w_tilde;
}

VectorXd eid_filter_derivative(const EidState& eid, const VectorXd& w_hat) {
  require_shape(w_hat, eid.b_f.cols(), 1, "w_hat");
  return eid.a_f * eid.x_f + eid.b_f * w_hat;
}

VectorXd total_control(const VectorXd& u_f, const EidState& eid) {
  if (!eid.enabled) return u_f;
  return u_f - eid.filtered();
}

}  // namespace omrc
