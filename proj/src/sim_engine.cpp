#include "omrc/sim_engine.hpp"

#include <cmath>
#include <cstring>

#include "omrc/eid.hpp"
#include "omrc/mrc.hpp"
#include "omrc/numerics/history_buffer.hpp"
#include "omrc/numerics/linalg.hpp"
#include "omrc/numerics/rk4.hpp"
#include "omrc/observer.hpp"

namespace omrc {
namespace {

Eigen::Index grid_count(double span, double step, const char* what) {
  const double ratio = span / step;
  const double rounded = std::round(ratio);
  if (!std::isfinite(ratio) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw_error(ErrorKind::kConfigError,
                std::string(what) + " is not an integer multiple of the integration step");
  }
  return static_cast<Eigen::Index>(rounded);
}

struct LoopSignals {
  double y_r = 0.0;
  double y = 0.0;
  double y_hat = 0.0;
  double eps = 0.0;
  double v = 0.0;
  VectorXd u_f, u, omega, w_hat, w_tilde;
};

// Scratch objects reused across stage evaluations of one run.
class Loop {
 public:
  Loop(const Scenario& s)
      : s_(s),
        n_(s.plant.states()),
        obs_{VectorXd::Zero(n_), s.gains.observer},
        eid_(make_eid(s.plant.b(), s.w_f, s.eid_enabled)) {
    if (s.preview.t_r > 0.0) {
      preview_.emplace(s.gains, *s.augmented, s.control_weight, s.preview.t_r, s.preview.quad_step);
    }
  }

  Eigen::Index state_size() const { return 2 * n_ + 1 + eid_.x_f.size(); }
  Eigen::Index filter_size() const { return eid_.x_f.size(); }

  LoopSignals evaluate(double t, const VectorXd& z, double x_a_delayed, const VectorXd& held) {
    const LtiPlant& plant = s_.plant;
    const auto x = z.head(n_);
    obs_.x_hat = z.segment(n_, n_);
    eid_.x_f = z.tail(eid_.x_f.size());

    LoopSignals sig;
    sig.y = (plant.c() * x)(0);
    sig.y_hat = (plant.c() * obs_.x_hat)(0);
    sig.y_r = eval_signal(s_.reference, t);
    sig.eps = tracking_error(sig.y_r, sig.y);
    sig.v = mrc_output(x_a_delayed, sig.eps);
    const VectorXd f1 = preview_ ? (*preview_)(s_.reference, t) : VectorXd::Zero(plant.inputs());
    sig.u_f = feedback_law(s_.gains, held, sig.v, f1);
    sig.w_tilde = eid_.filtered();
    sig.u = total_control(sig.u_f, eid_);
    sig.w_hat = eid_estimate(eid_, obs_.gain, VectorXd::Constant(1, sig.y),
                             VectorXd::Constant(1, sig.y_hat), sig.w_tilde);
    sig.omega.resize(plant.disturbances());
    for (Eigen::Index i = 0; i < sig.omega.size(); ++i) {
      sig.omega(i) = eval_signal(s_.disturbance[static_cast<std::size_t>(i)], t);
    }
    return sig;
  }

  VectorXd derivative(const VectorXd& z, double x_a_delayed, const LoopSignals& sig) {
    const LtiPlant& plant = s_.plant;
    VectorXd dz(z.size());
    dz.head(n_) = plant_derivative(plant, z.head(n_), sig.u, sig.omega);
    dz.segment(n_, n_) = observer_derivative(plant, obs_, sig.u_f, VectorXd::Constant(1, sig.y));
    dz(2 * n_) = mrc_derivative(s_.w_a, z(2 * n_), x_a_delayed, sig.eps);
    dz.tail(eid_.x_f.size()) = eid_filter_derivative(eid_, sig.w_hat);
    return dz;
  }

 private:
  const Scenario& s_;
  Eigen::Index n_;
  ObserverState obs_;
  EidState eid_;
  std::optional<PreviewFeedforward> preview_;
};

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

bool same_bits(const MatrixXd& a, const MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.size() == 0 ||
          std::memcmp(a.data(), b.data(), static_cast<std::size_t>(a.size()) * sizeof(double)) == 0);
}

}  // namespace

void Scenario::validate() const {
  const Eigen::Index n = plant.states();
  const Eigen::Index m = plant.inputs();
  if (plant.outputs() != 1) throw_error(ErrorKind::kUnsupportedMultiOutput, "the loop requires p = 1");
  require_shape(gains.k_p, m, n, "k_p");
  require_shape(gains.k_c, m, 1, "k_c");
  require_shape(gains.observer, n, 1, "observer gain L");
  if (!is_hurwitz(plant.a() - gains.observer * plant.c())) {
    throw_error(ErrorKind::kConfigError, "A - L C is not Hurwitz");
  }
  if (static_cast<Eigen::Index>(disturbance.size()) != plant.disturbances()) {
    throw_error(ErrorKind::kConfigError, "need one disturbance signal per B_omega column");
  }
  reference.validate();
  for (const auto& d : disturbance) d.validate();
  if (!(step > 0.0)) throw_error(ErrorKind::kConfigError, "integration step must be positive");
  if (!(horizon >= 0.0)) throw_error(ErrorKind::kConfigError, "horizon must be >= 0");
  if (!(w_a > 0.0) || !(period > 0.0) || !(w_f > 0.0)) {
    throw_error(ErrorKind::kConfigError, "w_a, T and w_f must be positive");
  }
  grid_count(period, step, "MRC period T");
  grid_count(horizon, step, "horizon");
  if (trigger.mode != TriggerMode::kContinuous) {
    trigger.validate(n);
    grid_count(trigger.period, step, "trigger period T1");
  }
  if (preview.t_r > 0.0) {
    if (!augmented) throw_error(ErrorKind::kConfigError, "preview needs the augmented system");
    require_shape(gains.riccati, augmented->n_bar(), augmented->n_bar(), "K");
  }
}

Eigen::Index Scenario::steps() const { return grid_count(horizon, step, "horizon"); }

void Trace::resize(Eigen::Index samples, Eigen::Index n, Eigen::Index m, Eigen::Index l) {
  const auto count = static_cast<std::size_t>(samples);
  for (auto* column : {&t, &y, &y_r, &eps, &v, &x_a, &rho}) column->assign(count, 0.0);
  event.assign(count, 0);
  u = MatrixXd::Zero(samples, m);
  u_f = MatrixXd::Zero(samples, m);
  omega = MatrixXd::Zero(samples, l);
  omega_hat = MatrixXd::Zero(samples, m);
  omega_tilde = MatrixXd::Zero(samples, m);
  x = MatrixXd::Zero(samples, n);
  x_hat = MatrixXd::Zero(samples, n);
  x_held = MatrixXd::Zero(samples, n);
}

bool identical(const Trace& a, const Trace& b) {
  return a.step == b.step && same_bits(a.t, b.t) && same_bits(a.y, b.y) && same_bits(a.y_r, b.y_r) &&
         same_bits(a.eps, b.eps) && same_bits(a.v, b.v) && same_bits(a.x_a, b.x_a) &&
         same_bits(a.rho, b.rho) && a.event == b.event && same_bits(a.u, b.u) &&
         same_bits(a.u_f, b.u_f) && same_bits(a.omega, b.omega) &&
         same_bits(a.omega_hat, b.omega_hat) && same_bits(a.omega_tilde, b.omega_tilde) &&
         same_bits(a.x, b.x) && same_bits(a.x_hat, b.x_hat) && same_bits(a.x_held, b.x_held) &&
         same_bits(a.event_log, b.event_log);
}

Trace run_scenario(const Scenario& s) {
  s.validate();
  const Eigen::Index n = s.plant.states();
  const Eigen::Index total = s.steps();
  const Eigen::Index lag = grid_count(s.period, s.step, "MRC period T");
  const bool continuous = s.trigger.mode == TriggerMode::kContinuous;
  const Eigen::Index check_every = continuous ? 0 : grid_count(s.trigger.period, s.step, "T1");

  Loop loop(s);
  VectorXd z = VectorXd::Zero(loop.state_size());
  auto history = HistoryBuffer<double>::for_delay(s.step, 1, s.period);
  std::optional<TriggerState> trigger;
  if (!continuous) trigger.emplace(s.trigger, VectorXd(z.segment(n, n)), 0.0);

  Trace trace;
  trace.step = s.step;
  trace.resize(total + 1, n, s.plant.inputs(), s.plant.disturbances());
  if (!continuous) trace.event[0] = 1;

  for (Eigen::Index k = 0; k <= total; ++k) {
    const double t = static_cast<double>(k) * s.step;
    const VectorXd x_hat = z.segment(n, n);
    if (trigger && k > 0 && k % check_every == 0) {
      const double t_check = static_cast<double>(k / check_every) * s.trigger.period;
      if (trigger->check_and_update(x_hat, t_check) == TriggerDecision::kTransmit) trace.event[k] = 1;
    }
    const VectorXd held = trigger ? trigger->held_value() : x_hat;
    const double delayed_now = history.sample_index(k - lag)(0);
    const LoopSignals sig = loop.evaluate(t, z, delayed_now, held);

    const auto row = static_cast<std::size_t>(k);
    trace.t[row] = t;
    trace.y[row] = sig.y;
    trace.y_r[row] = sig.y_r;
    trace.eps[row] = sig.eps;
    trace.v[row] = sig.v;
    trace.x_a[row] = z(2 * n);
    trace.rho[row] = trigger ? trigger->threshold() : 0.0;
    trace.u.row(k) = sig.u.transpose();
    trace.u_f.row(k) = sig.u_f.transpose();
    trace.omega.row(k) = sig.omega.transpose();
    trace.omega_hat.row(k) = sig.w_hat.transpose();
    trace.omega_tilde.row(k) = sig.w_tilde.transpose();
    trace.x.row(k) = z.head(n).transpose();
    trace.x_hat.row(k) = x_hat.transpose();
    trace.x_held.row(k) = held.transpose();

    history.push(VectorXd::Constant(1, z(2 * n)));
    if (k == total) break;

    const double delayed_next = history.sample_index(k + 1 - lag)(0);
    auto field = [&](double tau, const VectorXd& stage) {
      const double theta = (tau - t) / s.step;
      const double delayed = delayed_now + theta * (delayed_next - delayed_now);
      const VectorXd stage_held = continuous ? VectorXd(stage.segment(n, n)) : held;
      const LoopSignals stage_sig = loop.evaluate(tau, stage, delayed, stage_held);
      return loop.derivative(stage, delayed, stage_sig);
    };
    try {
      z = rk4_step<double>(field, t, z, s.step);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNonFinite) throw;
      throw_error(ErrorKind::kDiverged, "non-finite state at t = " + std::to_string(t + s.step));
    }
    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > s.divergence_bound) {
      throw_error(ErrorKind::kDiverged, "state left the divergence bound at t = " +
                                            std::to_string(t + s.step));
    }
  }

  if (trigger) {
    trace.event_log = trigger->event_log();
    trace.checks = trigger->checks();
  }
  return trace;
}

AnalysisBlocks build_analysis_matrices(const Scenario& s) {
  const LtiPlant& plant = s.plant;
  const Eigen::Index n = plant.states();
  const Eigen::Index m = plant.inputs();
  require_shape(s.gains.k_p, m, n, "k_p");
  require_shape(s.gains.k_c, m, 1, "k_c");
  require_shape(s.gains.observer, n, plant.outputs(), "L");
  const EidState eid = make_eid(plant.b(), s.w_f, s.eid_enabled);
  const MatrixXd& a = plant.a();
  const MatrixXd& b = plant.b();
  const MatrixXd& c = plant.c();
  const MatrixXd& l = s.gains.observer;

  AnalysisBlocks blocks;
  blocks.a_minus_b_kc_c = a - b * s.gains.k_c * c;
  blocks.b_kc = b * s.gains.k_c;
  blocks.b_kp = b * s.gains.k_p;
  blocks.minus_b_cf = -b * eid.c_f;
  blocks.a_minus_lc = a - l * c;
  blocks.minus_wa = -s.w_a;
  blocks.wa = s.w_a;
  blocks.minus_wa_c = -s.w_a * c;
  blocks.af_plus_bf_cf = eid.a_f + eid.b_f * eid.c_f;
  blocks.bf_bplus_lc = eid.b_f * eid.b_plus * l * c;
  blocks.observer_spectrum = eigenvalues(blocks.a_minus_lc);
  blocks.filter_spectrum = eigenvalues(blocks.af_plus_bf_cf);
  blocks.observer_hurwitz = is_hurwitz(blocks.a_minus_lc);
  blocks.filter_hurwitz = is_hurwitz(blocks.af_plus_bf_cf);
  return blocks;
}

}  // namespace omrc
