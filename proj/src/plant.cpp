#include "omrc/plant.hpp"

#include <cmath>
#include <numbers>

#include "omrc/numerics/linalg.hpp"

namespace omrc {

LtiPlant::LtiPlant(MatrixXd a, MatrixXd b, MatrixXd c)
    : LtiPlant(a, b, std::move(c), b) {}

LtiPlant::LtiPlant(MatrixXd a, MatrixXd b, MatrixXd c, MatrixXd b_omega)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), b_omega_(std::move(b_omega)) {
  require_square(a_, "A");
  const Eigen::Index n = a_.rows();
  if (b_.rows() != n || b_.cols() < 1) throw_error(ErrorKind::kDimensionMismatch, "B must have n rows");
  if (c_.cols() != n || c_.rows() < 1) throw_error(ErrorKind::kDimensionMismatch, "C must have n columns");
  if (b_omega_.rows() != n || b_omega_.cols() < 1) {
    throw_error(ErrorKind::kDimensionMismatch, "B_omega must have n rows");
  }
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
  require_finite(b_omega_, "B_omega");
  if (numerical_rank(controllability_matrix(a_, b_), kRankTolerance) < n) {
    throw_error(ErrorKind::kNotControllable, "(A, B) is not controllable");
  }
  if (numerical_rank(observability_matrix(a_, c_), kRankTolerance) < n) {
    throw_error(ErrorKind::kNotObservable, "(A, C) is not observable");
  }
}

LtiPlant rotational_speed_plant() {
  MatrixXd a(3, 3);
  // clang-format off
  a << -31.31,   0.0,  -2.83e4,
         0.0,  -10.25,  8001.0,
         1.0,   -1.0,     0.0;
  // clang-format on
  MatrixXd b(3, 1);
  b << 28.06, 0.0, 0.0;
  MatrixXd c(1, 3);
  c << 1.0, 0.0, 0.0;
  return LtiPlant(a, b, c);
}

VectorXd plant_derivative(const LtiPlant& plant, const VectorXd& x, const VectorXd& u,
                          const VectorXd& omega) {
  require_shape(x, plant.states(), 1, "x");
  require_shape(u, plant.inputs(), 1, "u");
  require_shape(omega, plant.disturbances(), 1, "omega");
  return plant.a() * x + plant.b() * u + plant.b_omega() * omega;
}

VectorXd plant_output(const LtiPlant& plant, const VectorXd& x) {
  require_shape(x, plant.states(), 1, "x");
  return plant.c() * x;
}

namespace {

double sum_sines(const std::vector<SineTerm>& terms, double t) {
  double acc = 0.0;
  for (const auto& term : terms) acc += term.amplitude * std::sin(term.angular_frequency * t);
  return acc;
}

double sum_sines_derivative(const std::vector<SineTerm>& terms, double t) {
  double acc = 0.0;
  for (const auto& term : terms) {
    acc += term.amplitude * term.angular_frequency * std::cos(term.angular_frequency * t);
  }
  return acc;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_terms(const std::vector<SineTerm>& terms) {
  for (const auto& term : terms) {
    if (!std::isfinite(term.amplitude) || !std::isfinite(term.angular_frequency) ||
        term.angular_frequency < 0.0) {
      throw_error(ErrorKind::kConfigError, "sine terms need finite amplitude and frequency >= 0");
    }
  }
}

}  // namespace

void SignalSpec::validate() const {
  for (const auto& component : components) {
    std::visit(Overloaded{
                   [](const ZeroSignal&) {},
                   [](const SumOfSines& s) { validate_terms(s.terms); },
                   [](const WindowedSumOfSines& s) {
                     if (!(s.t_start < s.t_end)) {
                       throw_error(ErrorKind::kConfigError, "signal window must satisfy t_start < t_end");
                     }
                     validate_terms(s.terms);
                   },
                   [](const StepSignal& s) {
                     if (!std::isfinite(s.time) || !std::isfinite(s.amplitude)) {
                       throw_error(ErrorKind::kConfigError, "step time and amplitude must be finite");
                     }
                   },
               },
               component);
  }
}

bool SignalSpec::is_smooth() const {
  for (const auto& component : components) {
    if (std::holds_alternative<WindowedSumOfSines>(component) ||
        std::holds_alternative<StepSignal>(component)) {
      return false;
    }
  }
  return true;
}

double eval_signal(const SignalSpec& spec, double t) {
  double value = 0.0;
  for (const auto& component : spec.components) {
    value += std::visit(Overloaded{
                            [](const ZeroSignal&) { return 0.0; },
                            [t](const SumOfSines& s) { return sum_sines(s.terms, t); },
                            [t](const WindowedSumOfSines& s) {
                              return (t >= s.t_start && t <= s.t_end) ? sum_sines(s.terms, t) : 0.0;
                            },
                            [t](const StepSignal& s) { return t >= s.time ? s.amplitude : 0.0; },
                        },
                        component);
  }
  return value;
}

double eval_signal_derivative(const SignalSpec& spec, double t, double fd_step) {
  if (spec.is_smooth()) {
    double value = 0.0;
    for (const auto& component : spec.components) {
      if (const auto* s = std::get_if<SumOfSines>(&component)) value += sum_sines_derivative(s->terms, t);
    }
    return value;
  }
  return (eval_signal(spec, t + fd_step) - eval_signal(spec, t - fd_step)) / (2.0 * fd_step);
}

SignalSpec periodic_reference() {
  constexpr double pi = std::numbers::pi;
  return {{SumOfSines{{{1.0, pi}, {0.5, 2.0 * pi}, {0.5, 3.0 * pi}}}}};
}

SignalSpec windowed_disturbance() {
  constexpr double pi = std::numbers::pi;
  return {{WindowedSumOfSines{6.0, 8.0, {{2.0, 4.0 * pi}, {1.0, 5.0 * pi}, {1.0, 6.0 * pi}}},
           WindowedSumOfSines{12.0, 18.0, {{3.0, 2.0 * pi}}}}};
}

}  // namespace omrc
