#include "omrc/numerics/care.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "omrc/numerics/linalg.hpp"
#include "omrc/numerics/lyapunov.hpp"

namespace omrc {
namespace {

double min_real_part(const MatrixXd& a) {
  double lo = 0.0;
  bool first = true;
  for (const auto& lambda : eigenvalues(a)) {
    lo = first ? lambda.real() : std::min(lo, lambda.real());
    first = false;
  }
  return lo;
}

// Bass gain F with A - B F Hurwitz, from
// (A + beta I) Z + Z (A + beta I)^T = 2 B R^{-1} B^T. Empty when Z is not
// positive definite, i.e. (A, B) is not controllable.
std::optional<MatrixXd> bass_gain(const MatrixXd& a, const MatrixXd& b, const MatrixXd& r_inv) {
  const Eigen::Index n = a.rows();
  const double beta = 1.1 * std::max(0.0, -min_real_part(a)) + 1.0;
  const MatrixXd shifted = -(a + beta * MatrixXd::Identity(n, n)).transpose();
  const MatrixXd z = solve_continuous_lyapunov(shifted, 2.0 * b * r_inv * b.transpose());
  Eigen::LLT<MatrixXd> z_chol(z);
  if (z_chol.info() != Eigen::Success) return std::nullopt;
  return MatrixXd(r_inv * b.transpose() * z_chol.solve(MatrixXd::Identity(n, n)));
}

// Stabilizing start gain. When (A, B) is only stabilizable, the Bass step
// runs on the controllable subspace and the remaining modes must already be
// stable.
MatrixXd shifted_start_gain(const MatrixXd& a, const MatrixXd& b, const MatrixXd& r_inv, double hurwitz_tol) {
  std::optional<MatrixXd> f = bass_gain(a, b, r_inv);
  if (!f) {
    Eigen::JacobiSVD<MatrixXd> svd(controllability_matrix(a, b), Eigen::ComputeFullU);
    const Eigen::Index rank = numerical_rank(controllability_matrix(a, b));
    const MatrixXd v = svd.matrixU().leftCols(rank);
    std::optional<MatrixXd> f_r = rank > 0 ? bass_gain(v.transpose() * a * v, v.transpose() * b, r_inv)
                                           : std::optional<MatrixXd>(MatrixXd::Zero(b.cols(), 0));
    if (!f_r) throw_error(ErrorKind::kNonStabilizable, "controllable part has a singular Gramian");
    f = *f_r * v.transpose();
  }
  if (!is_hurwitz(a - b * *f, hurwitz_tol)) {
    throw_error(ErrorKind::kNonStabilizable, "uncontrollable modes are not stable");
  }
  return *f;
}

}  // namespace

double care_residual(const MatrixXd& a, const MatrixXd& b, const MatrixXd& q, const MatrixXd& r,
                     const MatrixXd& k) {
  const MatrixXd r_inv_bt = r.fullPivLu().solve(b.transpose());
  const MatrixXd res = a.transpose() * k + k * a - k * b * r_inv_bt * k + q;
  return res.norm() / std::max(1.0, q.norm());
}

MatrixXd solve_care(const MatrixXd& a, const MatrixXd& b, const MatrixXd& q, const MatrixXd& r,
                    const CareOptions& options) {
  require_square(a, "A");
  const Eigen::Index n = a.rows();
  if (b.rows() != n || b.cols() < 1) throw_error(ErrorKind::kDimensionMismatch, "B rows must match A");
  const Eigen::Index m = b.cols();
  require_shape(q, n, n, "Q");
  require_shape(r, m, m, "R");
  require_finite(a, "A");
  require_finite(b, "B");
  require_finite(q, "Q");
  require_finite(r, "R");

  Eigen::FullPivLU<MatrixXd> r_lu(r);
  if (!r_lu.isInvertible()) throw_error(ErrorKind::kSingular, "R is not invertible");
  const MatrixXd r_inv = r_lu.inverse();
  const MatrixXd s = b * r_inv * b.transpose();

  MatrixXd f = is_hurwitz(a, options.hurwitz_tolerance)
                   ? MatrixXd::Zero(m, n)
                   : shifted_start_gain(a, b, r_inv, options.hurwitz_tolerance);

  MatrixXd k = MatrixXd::Zero(n, n);
  double residual = 0.0;
  bool converged = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    const MatrixXd closed = a - b * f;
    const MatrixXd x = solve_continuous_lyapunov(closed, q + f.transpose() * r * f);
    const double change = (x - k).norm() / std::max(1.0, x.norm());
    k = x;
    f = r_inv * b.transpose() * k;
    residual = care_residual(a, b, q, r, k);
    if (residual < 1e-3 * options.tolerance || change < 1e-14) {
      converged = true;
      break;
    }
  }
  if (!converged && !(residual < options.tolerance)) {
    throw_error(ErrorKind::kNoConvergence,
                "Newton-Kleinman iteration budget exhausted (residual " + std::to_string(residual) + ")");
  }
  if (!(residual < options.tolerance)) {
    throw_error(ErrorKind::kNoConvergence,
                "Riccati residual " + std::to_string(residual) + " above tolerance");
  }
  if (!is_hurwitz(a - s * k, options.hurwitz_tolerance)) {
    throw_error(ErrorKind::kNonStabilizable, "Riccati solution is not stabilizing");
  }
  return k;
}

}  // namespace omrc
