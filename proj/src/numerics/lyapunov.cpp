#include "omrc/numerics/lyapunov.hpp"

#include <vector>

namespace omrc {
namespace {

struct Block {
  Eigen::Index start;
  Eigen::Index size;
};

std::vector<Block> schur_blocks(const MatrixXd& t) {
  std::vector<Block> blocks;
  const Eigen::Index n = t.rows();
  for (Eigen::Index i = 0; i < n;) {
    const bool pair = i + 1 < n && t(i + 1, i) != 0.0;
    blocks.push_back({i, pair ? 2 : 1});
    i += pair ? 2 : 1;
  }
  return blocks;
}

// (P kron Q)
MatrixXd kron(const MatrixXd& p, const MatrixXd& q) {
  MatrixXd out(p.rows() * q.rows(), p.cols() * q.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      out.block(i * q.rows(), j * q.cols(), q.rows(), q.cols()) = p(i, j) * q;
    }
  }
  return out;
}

}  // namespace

MatrixXd solve_quasi_triangular_lyapunov(const MatrixXd& t, const MatrixXd& c) {
  require_square(t, "T");
  require_shape(c, t.rows(), t.rows(), "Lyapunov right-hand side");
  const auto blocks = schur_blocks(t);
  MatrixXd y = MatrixXd::Zero(t.rows(), t.cols());

  for (const Block& bj : blocks) {
    for (const Block& bi : blocks) {
      MatrixXd rhs = c.block(bi.start, bj.start, bi.size, bj.size);
      if (bi.start > 0) {
        rhs.noalias() -= t.block(0, bi.start, bi.start, bi.size).transpose() *
                         y.block(0, bj.start, bi.start, bj.size);
      }
      if (bj.start > 0) {
        rhs.noalias() -= y.block(bi.start, 0, bi.size, bj.start) *
                         t.block(0, bj.start, bj.start, bj.size);
      }
      const MatrixXd tii = t.block(bi.start, bi.start, bi.size, bi.size);
      const MatrixXd tjj = t.block(bj.start, bj.start, bj.size, bj.size);
      // vec(Tii^T Y + Y Tjj) = (I kron Tii^T + Tjj^T kron I) vec(Y)
      const MatrixXd op = kron(MatrixXd::Identity(bj.size, bj.size), tii.transpose()) +
                          kron(tjj.transpose(), MatrixXd::Identity(bi.size, bi.size));
      Eigen::FullPivLU<MatrixXd> lu(op);
      if (!lu.isInvertible()) {
        throw_error(ErrorKind::kSingular, "A and -A share an eigenvalue; Lyapunov solution not unique");
      }
      const Eigen::VectorXd vec_rhs = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());
      const Eigen::VectorXd vec_y = lu.solve(vec_rhs);
      y.block(bi.start, bj.start, bi.size, bj.size) =
          Eigen::Map<const MatrixXd>(vec_y.data(), bi.size, bj.size);
    }
  }
  return y;
}

MatrixXd solve_continuous_lyapunov(const MatrixXd& a, const MatrixXd& q) {
  require_square(a, "A");
  require_shape(q, a.rows(), a.rows(), "Q");
  require_finite(a, "A");
  require_finite(q, "Q");
  Eigen::RealSchur<MatrixXd> schur(a);
  if (schur.info() != Eigen::Success) {
    throw_error(ErrorKind::kNoConvergence, "real Schur decomposition did not converge");
  }
  const MatrixXd& u = schur.matrixU();
  const MatrixXd& t = schur.matrixT();
  const MatrixXd c = -(u.transpose() * q * u);
  const MatrixXd y = solve_quasi_triangular_lyapunov(t, c);
  const MatrixXd x = u * y * u.transpose();
  return 0.5 * (x + x.transpose());
}

}  // namespace omrc
