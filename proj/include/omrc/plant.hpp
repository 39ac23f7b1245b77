#pragma once

#include <variant>
#include <vector>

#include "omrc/numerics/types.hpp"

namespace omrc {

/// x' = A x + B u + B_w w,  y = C x.
///
/// Construction checks dimensional consistency, controllability of (A, B) and
/// observability of (A, C). The rank tests treat singular values below
/// 1e-8 * sigma_max as zero.
class LtiPlant {
 public:
  /// B_w defaults to B (disturbance enters through the input channel).
  LtiPlant(MatrixXd a, MatrixXd b, MatrixXd c);
  LtiPlant(MatrixXd a, MatrixXd b, MatrixXd c, MatrixXd b_omega);

  const MatrixXd& a() const { return a_; }
  const MatrixXd& b() const { return b_; }
  const MatrixXd& c() const { return c_; }
  const MatrixXd& b_omega() const { return b_omega_; }

  Eigen::Index states() const { return a_.rows(); }
  Eigen::Index inputs() const { return b_.cols(); }
  Eigen::Index outputs() const { return c_.rows(); }
  Eigen::Index disturbances() const { return b_omega_.cols(); }

 private:
  MatrixXd a_, b_, c_, b_omega_;
};

inline constexpr double kRankTolerance = 1e-8;

/// The rotational speed-control model used throughout the examples.
LtiPlant rotational_speed_plant();

VectorXd plant_derivative(const LtiPlant& plant, const VectorXd& x, const VectorXd& u,
                          const VectorXd& omega);

VectorXd plant_output(const LtiPlant& plant, const VectorXd& x);

// --- Exogenous signals -------------------------------------------------------

/// amplitude * sin(angular_frequency * t)
struct SineTerm {
  double amplitude = 0.0;
  double angular_frequency = 0.0;
};

struct ZeroSignal {};

struct SumOfSines {
  std::vector<SineTerm> terms;
};

/// Sum of sines active on the closed window [t_start, t_end], zero elsewhere.
struct WindowedSumOfSines {
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<SineTerm> terms;
};

/// `amplitude` for t >= time, zero before.
struct StepSignal {
  double time = 0.0;
  double amplitude = 0.0;
};

using SignalComponent = std::variant<ZeroSignal, SumOfSines, WindowedSumOfSines, StepSignal>;

/// Scalar signal built as the sum of its components. An empty component list
/// is the zero signal; several components form a composite.
struct SignalSpec {
  std::vector<SignalComponent> components;

  /// Throws ConfigError on an ill-ordered window or negative frequency.
  void validate() const;
  /// True when every component is smooth (sines or zero) over the whole line.
  bool is_smooth() const;
};

double eval_signal(const SignalSpec& spec, double t);

/// Time derivative; analytic when the signal is smooth, otherwise a central
/// difference with step `fd_step`.
double eval_signal_derivative(const SignalSpec& spec, double t, double fd_step);

/// sin(pi t) + 0.5 sin(2 pi t) + 0.5 sin(3 pi t), period 2 s.
SignalSpec periodic_reference();

/// Periodic burst on [6, 8] s plus a sustained sinusoid on [12, 18] s.
SignalSpec windowed_disturbance();

}  // namespace omrc
