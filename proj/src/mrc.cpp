#include "omrc/mrc.hpp"

namespace omrc {

MrcState::MrcState(double w_a_in, double period_in, double step)
    : w_a(w_a_in),
      period(period_in),
      history(HistoryBuffer<double>::for_delay(step, 1, period_in)) {
  if (!(w_a > 0.0)) throw_error(ErrorKind::kConfigError, "w_a must be positive");
  if (!(period > 0.0)) throw_error(ErrorKind::kConfigError, "MRC period must be positive");
}

double mrc_derivative(const MrcState& state, double eps, double t) {
  return mrc_derivative(state.w_a, state.x_a, state.delayed(t), eps);
}

double mrc_output(const MrcState& state, double eps, double t) {
  return mrc_output(state.delayed(t), eps);
}

}  // namespace omrc
