#pragma once

#include <Eigen/Dense>

#include <string>

#include "omrc/error.hpp"

namespace omrc {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Default tolerances for the Riccati residual and the Hurwitz margin.
inline constexpr double kTolCare = 1e-9;
inline constexpr double kTolHurwitz = 1e-9;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  if (!m.allFinite()) throw_error(ErrorKind::kNonFinite, what + " has non-finite entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw_error(ErrorKind::kDimensionMismatch,
                what + " must be square and non-empty, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
}

template <typename Derived>
void require_shape(const Eigen::MatrixBase<Derived>& m, Eigen::Index rows, Eigen::Index cols,
                   const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw_error(ErrorKind::kDimensionMismatch,
                what + " expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                    ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace omrc
