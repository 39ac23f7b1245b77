#pragma once

#include "omrc/numerics/types.hpp"

namespace omrc {

/// Solves A^T X + X A + Q = 0 by the Bartels-Stewart method on the real Schur
/// form of A. Q must be symmetric; the returned X is symmetrized.
/// Throws Singular when A and -A share an eigenvalue (no unique solution).
MatrixXd solve_continuous_lyapunov(const MatrixXd& a, const MatrixXd& q);

/// Solves T^T Y + Y T = C for quasi-upper-triangular T (real Schur form).
MatrixXd solve_quasi_triangular_lyapunov(const MatrixXd& t, const MatrixXd& c);

}  // namespace omrc
