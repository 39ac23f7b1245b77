#pragma once

#include "omrc/numerics/types.hpp"

namespace omrc {

struct CareOptions {
  double tolerance = kTolCare;
  double hurwitz_tolerance = kTolHurwitz;
  int max_iterations = 200;
};

/// Normalized Frobenius residual of A^T K + K A - K B R^{-1} B^T K + Q,
/// divided by max(1, ||Q||_F).
double care_residual(const MatrixXd& a, const MatrixXd& b, const MatrixXd& q, const MatrixXd& r,
                     const MatrixXd& k);

/// Stabilizing solution of the continuous algebraic Riccati equation
///   A^T K + K A - K B R^{-1} B^T K + Q = 0
/// via Newton-Kleinman iteration. The starting gain is zero when A is already
/// Hurwitz and otherwise comes from the shifted-Lyapunov (Bass) construction.
///
/// Errors: Singular (R not invertible), NonStabilizable (no stabilizing start
/// or a non-stabilizing result), NoConvergence (iteration budget exhausted or
/// residual above tolerance).
MatrixXd solve_care(const MatrixXd& a, const MatrixXd& b, const MatrixXd& q, const MatrixXd& r,
                    const CareOptions& options = {});

}  // namespace omrc
