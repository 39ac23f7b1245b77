#include "omrc/numerics/linalg.hpp"

#include <algorithm>
#include <limits>

namespace omrc {

std::vector<std::complex<double>> eigenvalues(const MatrixXd& a) {
  require_square(a, "eigenvalue input");
  require_finite(a, "eigenvalue input");
  Eigen::EigenSolver<MatrixXd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw_error(ErrorKind::kNoConvergence, "QR iteration did not converge");
  }
  const Eigen::VectorXcd values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

double spectral_abscissa(const MatrixXd& a) {
  double abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& lambda : eigenvalues(a)) abscissa = std::max(abscissa, lambda.real());
  return abscissa;
}

bool is_hurwitz(const MatrixXd& a, double tol) { return spectral_abscissa(a) < -tol; }

Eigen::Index numerical_rank(const MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma(0) == 0.0) return 0;
  return (sigma.array() > rel_tol * sigma(0)).count();
}

MatrixXd controllability_matrix(const MatrixXd& a, const MatrixXd& b) {
  require_square(a, "A");
  require_shape(b, a.rows(), b.cols(), "B");
  const Eigen::Index n = a.rows();
  MatrixXd ctrb(n, n * b.cols());
  MatrixXd block = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.middleCols(i * b.cols(), b.cols()) = block;
    block = a * block;
  }
  return ctrb;
}

MatrixXd observability_matrix(const MatrixXd& a, const MatrixXd& c) {
  return controllability_matrix(a.transpose(), c.transpose()).transpose();
}

}  // namespace omrc
