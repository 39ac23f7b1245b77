#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "omrc/numerics/types.hpp"

namespace omrc {

/// Eigenvalues of a real square matrix (Hessenberg reduction + shifted QR).
std::vector<std::complex<double>> eigenvalues(const MatrixXd& a);

/// Largest real part over the spectrum.
double spectral_abscissa(const MatrixXd& a);

/// True iff every eigenvalue satisfies Re(lambda) < -tol.
bool is_hurwitz(const MatrixXd& a, double tol = kTolHurwitz);

/// Rank with singular values below rel_tol * sigma_max treated as zero.
Eigen::Index numerical_rank(const MatrixXd& m, double rel_tol = 1e-8);

/// [B, AB, ..., A^{n-1}B]
MatrixXd controllability_matrix(const MatrixXd& a, const MatrixXd& b);

/// [C; CA; ...; CA^{n-1}]
MatrixXd observability_matrix(const MatrixXd& a, const MatrixXd& c);

/// (B^T B)^{-1} B^T for a full-column-rank B.
template <typename Scalar>
MatrixX<Scalar> left_pseudo_inverse(const MatrixX<Scalar>& b) {
  if (b.rows() == 0 || b.cols() == 0 || b.cols() > b.rows()) {
    throw_error(ErrorKind::kRankDeficient, "left pseudo-inverse needs a tall, non-empty matrix");
  }
  require_finite(b, "B");
  const MatrixX<Scalar> gram = b.transpose() * b;
  Eigen::FullPivLU<MatrixX<Scalar>> lu(gram);
  if (lu.rank() < b.cols()) throw_error(ErrorKind::kRankDeficient, "B^T B is singular");
  return lu.solve(b.transpose());
}

/// exp(A t) by scaling and squaring with a degree-13 Pade approximant.
template <typename Scalar>
MatrixX<Scalar> matrix_exponential(const MatrixX<Scalar>& a, Scalar t) {
  require_square(a, "A");
  if (!std::isfinite(static_cast<double>(t))) {
    throw_error(ErrorKind::kNonFinite, "exponential time must be finite");
  }
  require_finite(a, "A");
  const Eigen::Index n = a.rows();
  const MatrixX<Scalar> ident = MatrixX<Scalar>::Identity(n, n);
  MatrixX<Scalar> at = a * t;
  const Scalar norm1 = at.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(static_cast<double>(norm1))) {
    throw_error(ErrorKind::kOverflow, "norm of A t is not representable");
  }
  if (norm1 == Scalar(0)) return ident;

  constexpr double kTheta13 = 5.371920351148152;
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(norm1) / kTheta13)));
    at /= std::ldexp(Scalar(1), squarings);
  }
  if (squarings > 1100) throw_error(ErrorKind::kOverflow, "exp(A t) exceeds double range");

  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  const MatrixX<Scalar> a2 = at * at;
  const MatrixX<Scalar> a4 = a2 * a2;
  const MatrixX<Scalar> a6 = a4 * a2;
  const MatrixX<Scalar> u_inner = a6 * (Scalar(b[13]) * a6 + Scalar(b[11]) * a4 + Scalar(b[9]) * a2) +
                                  Scalar(b[7]) * a6 + Scalar(b[5]) * a4 + Scalar(b[3]) * a2 +
                                  Scalar(b[1]) * ident;
  const MatrixX<Scalar> u = at * u_inner;
  const MatrixX<Scalar> v = a6 * (Scalar(b[12]) * a6 + Scalar(b[10]) * a4 + Scalar(b[8]) * a2) +
                            Scalar(b[6]) * a6 + Scalar(b[4]) * a4 + Scalar(b[2]) * a2 +
                            Scalar(b[0]) * ident;
  MatrixX<Scalar> result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
    if (!result.allFinite()) throw_error(ErrorKind::kOverflow, "exp(A t) exceeds double range");
  }
  if (!result.allFinite()) throw_error(ErrorKind::kOverflow, "exp(A t) exceeds double range");
  return result;
}

}  // namespace omrc
