#include "omrc/observer.hpp"

#include <algorithm>

#include "omrc/numerics/linalg.hpp"

namespace omrc {

ObserverState make_observer(const LtiPlant& plant, const MatrixXd& gain, double hurwitz_tol) {
  require_shape(gain, plant.states(), plant.outputs(), "observer gain L");
  require_finite(gain, "observer gain L");
  if (!is_hurwitz(plant.a() - gain * plant.c(), hurwitz_tol)) {
    throw_error(ErrorKind::kConfigError, "A - L C is not Hurwitz");
  }
  return {VectorXd::Zero(plant.states()), gain};
}

VectorXd observer_derivative(const LtiPlant& plant, const ObserverState& obs, const VectorXd& u_f,
                             const VectorXd& y) {
  require_shape(obs.x_hat, plant.states(), 1, "x_hat");
  require_shape(obs.gain, plant.states(), plant.outputs(), "L");
  require_shape(u_f, plant.inputs(), 1, "u_f");
  require_shape(y, plant.outputs(), 1, "y");
  return plant.a() * obs.x_hat + plant.b() * u_f + obs.gain * (y - plant.c() * obs.x_hat);
}

VectorXd estimation_error(const VectorXd& x, const VectorXd& x_hat) {
  if (x.size() != x_hat.size()) throw_error(ErrorKind::kDimensionMismatch, "x and x_hat sizes differ");
  return x - x_hat;
}

MatrixXd place_observer_poles(const LtiPlant& plant, const std::vector<std::complex<double>>& poles) {
  return place_observer_poles(plant.a(), plant.c(), poles);
}

MatrixXd place_observer_poles(const MatrixXd& a, const MatrixXd& c,
                              const std::vector<std::complex<double>>& poles) {
  require_square(a, "A");
  const Eigen::Index n = a.rows();
  if (c.rows() != 1) throw_error(ErrorKind::kUnsupportedMultiOutput, "pole placement needs p = 1");
  require_shape(c, 1, n, "C");
  if (static_cast<Eigen::Index>(poles.size()) != n) {
    throw_error(ErrorKind::kDimensionMismatch, "need exactly n observer poles");
  }
  for (const auto& pole : poles) {
    if (std::abs(pole.imag()) == 0.0) continue;
    const bool has_conjugate = std::any_of(poles.begin(), poles.end(), [&](const auto& q) {
      return std::abs(q - std::conj(pole)) <= 1e-9 * std::max(1.0, std::abs(pole));
    });
    if (!has_conjugate) throw_error(ErrorKind::kConfigError, "poles must be closed under conjugation");
  }

  // Monic characteristic polynomial, coefficients low to high.
  std::vector<std::complex<double>> coeff{1.0};
  for (const auto& pole : poles) {
    std::vector<std::complex<double>> next(coeff.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      next[i + 1] += coeff[i];
      next[i] -= pole * coeff[i];
    }
    coeff = std::move(next);
  }

  const MatrixXd obsv = observability_matrix(a, c);
  Eigen::FullPivLU<MatrixXd> lu(obsv);
  if (numerical_rank(obsv, 1e-8) < n || !lu.isInvertible()) {
    throw_error(ErrorKind::kNotObservable, "(A, C) is not observable");
  }

  // phi(A) by Horner's rule.
  MatrixXd phi = MatrixXd::Zero(n, n);
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) {
    phi = (phi * a).eval();
    phi.diagonal().array() += it->real();
  }
  VectorXd e_last = VectorXd::Zero(n);
  e_last(n - 1) = 1.0;
  return phi * lu.solve(e_last);
}

}  // namespace omrc
