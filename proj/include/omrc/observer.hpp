#pragma once

#include <complex>
#include <vector>

#include "omrc/plant.hpp"

namespace omrc {

/// Full-state observer  x_hat' = A x_hat + B u_f + L (y - C x_hat).
struct ObserverState {
  VectorXd x_hat;
  MatrixXd gain;  // L, n x p
};

/// Builds an observer state with x_hat = 0 after checking that A - L C is
/// Hurwitz; a failing check is a ConfigError.
ObserverState make_observer(const LtiPlant& plant, const MatrixXd& gain,
                            double hurwitz_tol = kTolHurwitz);

/// The drive term is u_f (the pre-EID control), not the compensated input.
VectorXd observer_derivative(const LtiPlant& plant, const ObserverState& obs, const VectorXd& u_f,
                             const VectorXd& y);

VectorXd estimation_error(const VectorXd& x, const VectorXd& x_hat);

/// Ackermann placement for single-output plants: returns L such that the
/// spectrum of A - L C equals `poles` (which must be closed under conjugation).
MatrixXd place_observer_poles(const LtiPlant& plant, const std::vector<std::complex<double>>& poles);
MatrixXd place_observer_poles(const MatrixXd& a, const MatrixXd& c,
                              const std::vector<std::complex<double>>& poles);

}  // namespace omrc
