#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "omrc/numerics/care.hpp"
#include "omrc/plant.hpp"

namespace omrc {

/// Augmented tracking model used for gain synthesis (n_bar = n + 2):
///
///   A_bar = [ A            0   0        ]   B_bar = [ B   ]
///           [ -C - CA     -I   0        ]           [ -CB ]
///           [ -wc C - CA   0  -wc I     ]           [ -CB ]
///
///   D_bar = [0; I; wc I],  D1_bar = [0; I; I]
struct AugmentedSystem {
  MatrixXd a_bar;
  MatrixXd b_bar;
  MatrixXd d_bar;
  MatrixXd d1_bar;
  double omega_c = 0.0;

  Eigen::Index n_bar() const { return a_bar.rows(); }
  Eigen::Index plant_states() const { return a_bar.rows() - 2; }
};

/// UnsupportedMultiOutput unless C has exactly one row.
AugmentedSystem build_augmented(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c, double omega_c);
AugmentedSystem build_augmented(const LtiPlant& plant, double omega_c);

/// Which Riccati column forms K_v. K_x is always columns 1..n.
///   kLastColumn:  K_v = column n_bar (filtered-error block)
///   kErrorColumn: K_v = column n + 1 (tracking-error block)
enum class KPartition { kLastColumn, kErrorColumn };

std::string_view to_string(KPartition partition);

struct GainSet {
  MatrixXd k_p;       // m x n
  MatrixXd k_c;       // m x 1
  MatrixXd riccati;   // K, n_bar x n_bar
  MatrixXd observer;  // L, n x p
  KPartition partition = KPartition::kLastColumn;
};

/// Both partitions of one Riccati solution. `principal` starts at
/// kLastColumn; simulation-based selection may change it.
struct GainCandidates {
  MatrixXd riccati;
  GainSet last_column;
  GainSet error_column;
  KPartition principal = KPartition::kLastColumn;

  const GainSet& get(KPartition partition) const {
    return partition == KPartition::kLastColumn ? last_column : error_column;
  }
  const GainSet& principal_gains() const { return get(principal); }
};

/// k_p = -R^{-1} B_bar^T K_x,  k_c = -R^{-1} B_bar^T K_v.
GainSet gains_from_riccati(const AugmentedSystem& aug, const MatrixXd& k, const MatrixXd& r,
                           KPartition partition, const MatrixXd& observer_gain);

/// Solves the Riccati equation on the augmented model and extracts both
/// candidate gain sets. Q_z must be symmetric positive definite.
GainCandidates synthesize_gains(const AugmentedSystem& aug, const MatrixXd& q_z, const MatrixXd& r,
                                const MatrixXd& observer_gain, const CareOptions& options = {});

struct ClosedLoopReport {
  double residual = 0.0;
  bool hurwitz = false;
  std::vector<std::complex<double>> spectrum;  // of A_bar - B_bar R^{-1} B_bar^T K
};

ClosedLoopReport verify_closed_loop(const AugmentedSystem& aug, const MatrixXd& k, const MatrixXd& q_z,
                                    const MatrixXd& r, double hurwitz_tol = kTolHurwitz);

/// u_f = k_p x_held + k_c v + f1
VectorXd feedback_law(const GainSet& gains, const VectorXd& x_held, double v, const VectorXd& f1);

/// Preview feedforward
///   f1(t) = -R^{-1} B_bar^T int_0^{t_r} e^{Ac s} K D_bar r(t+s) ds
///           -R^{-1} B_bar^T int_0^{t_r} e^{-Ac s} K D1_bar r'(t+s) ds
/// with Ac = A_bar^T - K B_bar R^{-1} B_bar^T, by composite Simpson
/// quadrature. The node matrices are precomputed once so repeated
/// evaluation only touches the reference signal.
class PreviewFeedforward {
 public:
  PreviewFeedforward(const GainSet& gains, const AugmentedSystem& aug, const MatrixXd& r, double t_r,
                     double quad_step);

  /// Zero vector of size m when the horizon is empty.
  VectorXd operator()(const SignalSpec& reference, double t) const;

  double horizon() const { return t_r_; }
  int intervals() const { return static_cast<int>(nodes_.size()) - 1; }

 private:
  double t_r_;
  double quad_step_;
  Eigen::Index inputs_;
  std::vector<double> nodes_;
  std::vector<MatrixXd> reference_weights_;   // m x p, quadrature weight folded in
  std::vector<MatrixXd> derivative_weights_;  // m x p
};

VectorXd compute_feedforward(const GainSet& gains, const AugmentedSystem& aug, const MatrixXd& r,
                             const SignalSpec& reference, double t, double t_r, double quad_step);

}  // namespace omrc
