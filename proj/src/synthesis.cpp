#include "omrc/synthesis.hpp"

#include <cmath>

#include "omrc/numerics/linalg.hpp"

namespace omrc {

std::string_view to_string(KPartition partition) {
  return partition == KPartition::kLastColumn ? "last_column" : "error_column";
}

AugmentedSystem build_augmented(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c,
                                double omega_c) {
  require_square(a, "A");
  const Eigen::Index n = a.rows();
  if (b.rows() != n || b.cols() < 1) throw_error(ErrorKind::kDimensionMismatch, "B must have n rows");
  if (c.cols() != n) throw_error(ErrorKind::kDimensionMismatch, "C must have n columns");
  if (c.rows() != 1) throw_error(ErrorKind::kUnsupportedMultiOutput, "augmentation requires p = 1");
  if (!std::isfinite(omega_c)) throw_error(ErrorKind::kNonFinite, "omega_c must be finite");
  const Eigen::Index m = b.cols();
  const Eigen::Index nb = n + 2;
  const MatrixXd ca = c * a;
  const MatrixXd cb = c * b;

  AugmentedSystem aug;
  aug.omega_c = omega_c;
  aug.a_bar = MatrixXd::Zero(nb, nb);
  aug.a_bar.topLeftCorner(n, n) = a;
  aug.a_bar.block(n, 0, 1, n) = -c - ca;
  aug.a_bar(n, n) = -1.0;
  aug.a_bar.block(n + 1, 0, 1, n) = -omega_c * c - ca;
  aug.a_bar(n + 1, n + 1) = -omega_c;

  aug.b_bar = MatrixXd::Zero(nb, m);
  aug.b_bar.topRows(n) = b;
  aug.b_bar.row(n) = -cb;
  aug.b_bar.row(n + 1) = -cb;

  aug.d_bar = MatrixXd::Zero(nb, 1);
  aug.d_bar(n, 0) = 1.0;
  aug.d_bar(n + 1, 0) = omega_c;
  aug.d1_bar = MatrixXd::Zero(nb, 1);
  aug.d1_bar(n, 0) = 1.0;
  aug.d1_bar(n + 1, 0) = 1.0;
  return aug;
}

AugmentedSystem build_augmented(const LtiPlant& plant, double omega_c) {
  return build_augmented(plant.a(), plant.b(), plant.c(), omega_c);
}

GainSet gains_from_riccati(const AugmentedSystem& aug, const MatrixXd& k, const MatrixXd& r,
                           KPartition partition, const MatrixXd& observer_gain) {
  const Eigen::Index nb = aug.n_bar();
  const Eigen::Index n = aug.plant_states();
  require_shape(k, nb, nb, "K");
  require_shape(r, aug.b_bar.cols(), aug.b_bar.cols(), "R");
  const MatrixXd full = -r.fullPivLu().solve(aug.b_bar.transpose() * k);
  GainSet gains;
  gains.k_p = full.leftCols(n);
  gains.k_c = full.col(partition == KPartition::kLastColumn ? nb - 1 : n);
  gains.riccati = k;
  gains.observer = observer_gain;
  gains.partition = partition;
  return gains;
}

GainCandidates synthesize_gains(const AugmentedSystem& aug, const MatrixXd& q_z, const MatrixXd& r,
                                const MatrixXd& observer_gain, const CareOptions& options) {
  require_shape(q_z, aug.n_bar(), aug.n_bar(), "Q_z");
  if ((q_z - q_z.transpose()).norm() > 1e-12 * std::max(1.0, q_z.norm()) ||
      Eigen::LLT<MatrixXd>(q_z).info() != Eigen::Success) {
    throw_error(ErrorKind::kConfigError, "Q_z must be symmetric positive definite");
  }
  GainCandidates out;
  out.riccati = solve_care(aug.a_bar, aug.b_bar, q_z, r, options);
  out.last_column = gains_from_riccati(aug, out.riccati, r, KPartition::kLastColumn, observer_gain);
  out.error_column = gains_from_riccati(aug, out.riccati, r, KPartition::kErrorColumn, observer_gain);
  return out;
}

ClosedLoopReport verify_closed_loop(const AugmentedSystem& aug, const MatrixXd& k, const MatrixXd& q_z,
                                    const MatrixXd& r, double hurwitz_tol) {
  ClosedLoopReport report;
  report.residual = care_residual(aug.a_bar, aug.b_bar, q_z, r, k);
  const MatrixXd closed =
      aug.a_bar - aug.b_bar * r.fullPivLu().solve(aug.b_bar.transpose()) * k;
  report.spectrum = eigenvalues(closed);
  report.hurwitz = is_hurwitz(closed, hurwitz_tol);
  return report;
}

VectorXd feedback_law(const GainSet& gains, const VectorXd& x_held, double v, const VectorXd& f1) {
  require_shape(x_held, gains.k_p.cols(), 1, "held state");
  require_shape(f1, gains.k_p.rows(), 1, "f1");
  return gains.k_p * x_held + gains.k_c * v + f1;
}

PreviewFeedforward::PreviewFeedforward(const GainSet& gains, const AugmentedSystem& aug,
                                       const MatrixXd& r, double t_r, double quad_step)
    : t_r_(t_r), quad_step_(quad_step), inputs_(aug.b_bar.cols()) {
  if (!(t_r >= 0.0) || !std::isfinite(t_r)) throw_error(ErrorKind::kConfigError, "t_r must be >= 0");
  if (t_r == 0.0) return;
  if (!(quad_step > 0.0)) throw_error(ErrorKind::kConfigError, "quad_step must be positive");
  const Eigen::Index nb = aug.n_bar();
  require_shape(gains.riccati, nb, nb, "K");

  int intervals = static_cast<int>(std::ceil(t_r / quad_step - 1e-9));
  intervals = std::max(2, intervals + (intervals % 2));
  const double step = t_r / intervals;

  const MatrixXd r_inv_bt = r.fullPivLu().solve(aug.b_bar.transpose());
  const MatrixXd& k = gains.riccati;
  const MatrixXd a_c = aug.a_bar.transpose() - k * aug.b_bar * r_inv_bt;
  const MatrixXd forward_step = matrix_exponential<double>(a_c, step);
  const MatrixXd backward_step = matrix_exponential<double>(a_c, -step);
  const MatrixXd kd = k * aug.d_bar;
  const MatrixXd kd1 = k * aug.d1_bar;

  MatrixXd forward = MatrixXd::Identity(nb, nb);
  MatrixXd backward = MatrixXd::Identity(nb, nb);
  for (int i = 0; i <= intervals; ++i) {
    const double simpson = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double w = simpson * step / 3.0;
    nodes_.push_back(i * step);
    reference_weights_.push_back(-w * r_inv_bt * forward * kd);
    derivative_weights_.push_back(-w * r_inv_bt * backward * kd1);
    if (!reference_weights_.back().allFinite() || !derivative_weights_.back().allFinite()) {
      throw_error(ErrorKind::kOverflow, "preview kernel exp(+-Ac s) exceeds double range");
    }
    forward = (forward * forward_step).eval();
    backward = (backward * backward_step).eval();
  }
}

VectorXd PreviewFeedforward::operator()(const SignalSpec& reference, double t) const {
  VectorXd f1 = VectorXd::Zero(inputs_);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double tau = t + nodes_[i];
    f1 += reference_weights_[i].col(0) * eval_signal(reference, tau);
    f1 += derivative_weights_[i].col(0) * eval_signal_derivative(reference, tau, quad_step_);
  }
  return f1;
}

VectorXd compute_feedforward(const GainSet& gains, const AugmentedSystem& aug, const MatrixXd& r,
                             const SignalSpec& reference, double t, double t_r, double quad_step) {
  return PreviewFeedforward(gains, aug, r, t_r, quad_step)(reference, t);
}

}  // namespace omrc
