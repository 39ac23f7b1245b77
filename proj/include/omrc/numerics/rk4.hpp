#pragma once

#include "omrc/numerics/types.hpp"

namespace omrc {

/// One classical fourth-order Runge-Kutta step of x' = f(t, x).
/// Throws NonFinite if any stage derivative is NaN/Inf.
template <typename Scalar, typename VectorField>
VectorX<Scalar> rk4_step(VectorField&& f, Scalar t, const VectorX<Scalar>& x, Scalar h) {
  if (!(h > Scalar(0))) throw_error(ErrorKind::kInvalidBounds, "rk4 step must be positive");
  const Scalar half = h / Scalar(2);
  const VectorX<Scalar> k1 = f(t, x);
  if (!k1.allFinite()) throw_error(ErrorKind::kNonFinite, "vector field at stage 1");
  const VectorX<Scalar> k2 = f(t + half, VectorX<Scalar>(x + half * k1));
  if (!k2.allFinite()) throw_error(ErrorKind::kNonFinite, "vector field at stage 2");
  const VectorX<Scalar> k3 = f(t + half, VectorX<Scalar>(x + half * k2));
  if (!k3.allFinite()) throw_error(ErrorKind::kNonFinite, "vector field at stage 3");
  const VectorX<Scalar> k4 = f(t + h, VectorX<Scalar>(x + h * k3));
  if (!k4.allFinite()) throw_error(ErrorKind::kNonFinite, "vector field at stage 4");
  return x + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

}  // namespace omrc
