#include "omrc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "omrc/numerics/linalg.hpp"
#include "omrc/observer.hpp"

namespace omrc {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double value) {
  std::ostringstream out;
  out.precision(6);
  out << value;
  return out.str();
}

Gate make_gate(std::string name, bool hard, bool passed, std::string detail) {
  return Gate{std::move(name), hard, passed, std::move(detail)};
}

}  // namespace

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kEidOn: return "eid_on";
    case Variant::kEidOff: return "eid_off";
    case Variant::kAdaptive: return "adaptive";
    case Variant::kStatic: return "static";
    case Variant::kContinuous: return "continuous";
    case Variant::kStepDisturbance: return "step_disturbance";
  }
  return "eid_on";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::kEidOn, Variant::kEidOff, Variant::kAdaptive, Variant::kStatic, Variant::kContinuous,
                    Variant::kStepDisturbance}) {
    if (name == to_string(v)) return v;
  }
  throw_error(ErrorKind::kConfigError, "unknown variant '" + std::string(name) + "'");
}

ScenarioConfig apply_variant(ScenarioConfig config, Variant variant) {
  switch (variant) {
    case Variant::kEidOn: config.eid_enabled = true; break;
    case Variant::kEidOff: config.eid_enabled = false; break;
    case Variant::kAdaptive: config.trigger.mode = TriggerMode::kAdaptive; break;
    case Variant::kStatic: config.trigger.mode = TriggerMode::kStatic; break;
    case Variant::kContinuous: config.trigger.mode = TriggerMode::kContinuous; break;
    case Variant::kStepDisturbance: config.step_enabled = true; break;
  }
  return config;
}

SynthesisOutcome synthesize(const ScenarioConfig& config) {
  const LtiPlant plant = config.plant();
  SynthesisOutcome out;
  out.observer_gain = config.observer_gain ? *config.observer_gain
                                           : place_observer_poles(plant, config.observer_poles);
  const auto start = std::chrono::steady_clock::now();
  out.augmented = build_augmented(plant, config.effective_omega_c());
  CareOptions options;
  options.tolerance = config.tol_care;
  options.hurwitz_tolerance = config.tol_hurwitz;
  out.candidates = synthesize_gains(out.augmented, config.q_z, config.r, out.observer_gain, options);
  out.seconds = seconds_since(start);
  out.certificate =
      verify_closed_loop(out.augmented, out.candidates.riccati, config.q_z, config.r, config.tol_hurwitz);
  if (config.partition == PartitionChoice::kLastColumn) out.candidates.principal = KPartition::kLastColumn;
  if (config.partition == PartitionChoice::kErrorColumn) out.candidates.principal = KPartition::kErrorColumn;
  return out;
}

Scenario make_scenario(const ScenarioConfig& config, const GainSet& gains, const AugmentedSystem& augmented) {
  Scenario s{config.plant(), gains};
  s.augmented = augmented;
  s.control_weight = config.r;
  s.w_a = config.w_a;
  s.period = config.period;
  s.w_f = config.w_f;
  s.eid_enabled = config.eid_enabled;
  s.trigger = config.trigger;
  s.reference = config.reference;
  s.disturbance = config.disturbance;
  if (config.step_enabled && !s.disturbance.empty()) {
    s.disturbance.front().components.emplace_back(config.step_disturbance);
  }
  s.horizon = config.horizon;
  s.step = config.step;
  s.preview = config.preview;
  return s;
}

RunOutcome run_config(const ScenarioConfig& config, const GainSet& gains, const AugmentedSystem& augmented,
                      std::string label) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  out.label = std::move(label);
  out.trace = run_scenario(make_scenario(config, gains, augmented));
  out.seconds = seconds_since(start);
  out.metrics = compute_metrics(out.trace);
  out.metrics.realized_cost = realized_cost(out.trace, config.q_z, config.r);
  return out;
}

KPartition resolve_partition(const ScenarioConfig& config, SynthesisOutcome& outcome) {
  if (config.partition != PartitionChoice::kAuto) return outcome.candidates.principal;
  auto score = [&](KPartition p) {
    try {
      const Trace trace = run_scenario(make_scenario(config, outcome.candidates.get(p), outcome.augmented));
      return compute_metrics(trace).rmse;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDiverged) throw;
      return std::numeric_limits<double>::infinity();
    }
  };
  const double last = score(KPartition::kLastColumn);
  const double error = score(KPartition::kErrorColumn);
  if (!std::isfinite(last) && !std::isfinite(error)) {
    throw_error(ErrorKind::kDiverged, "both gain partitions diverge on the base scenario");
  }
  outcome.candidates.principal = error < last ? KPartition::kErrorColumn : KPartition::kLastColumn;
  return outcome.candidates.principal;
}

std::vector<RunOutcome> run_variants(const ScenarioConfig& config, const GainSet& gains,
                                     const AugmentedSystem& augmented, const std::vector<Variant>& variants,
                                     bool parallel) {
  std::vector<RunOutcome> results;
  if (!parallel) {
    for (Variant v : variants) {
      results.push_back(run_config(apply_variant(config, v), gains, augmented, std::string(to_string(v))));
    }
    return results;
  }
  std::vector<std::future<RunOutcome>> pending;
  for (Variant v : variants) {
    pending.push_back(std::async(std::launch::async, [&, v] {
      return run_config(apply_variant(config, v), gains, augmented, std::string(to_string(v)));
    }));
  }
  for (auto& f : pending) results.push_back(f.get());
  return results;
}

double gain_deviation(const GainSet& gains, const PublishedGains& published) {
  double worst = std::abs(gains.k_c(0, 0) - published.k_c) / std::abs(published.k_c);
  for (std::size_t i = 0; i < published.k_p.size() && static_cast<Eigen::Index>(i) < gains.k_p.cols(); ++i) {
    const double ref = published.k_p[i];
    worst = std::max(worst, std::abs(gains.k_p(0, static_cast<Eigen::Index>(i)) - ref) / std::abs(ref));
  }
  return worst;
}

double max_abs_error_after(const Trace& trace, double after) {
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    if (trace.t[k] > after) worst = std::max(worst, std::abs(trace.eps[k]));
  }
  return worst;
}

double settle_time(const Trace& trace, double after, double band) {
  double last_outside = -1.0;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    if (trace.t[k] > after && std::abs(trace.eps[k]) > band) last_outside = trace.t[k];
  }
  if (last_outside < 0.0) return 0.0;
  if (last_outside >= trace.t.back()) return std::numeric_limits<double>::infinity();
  return last_outside + trace.step - after;
}

TriggerAudit audit_trigger(const Trace& trace, const TriggerConfig& config) {
  TriggerAudit audit;
  const auto grid = [&](double t) { return std::llround(t / trace.step); };
  const long long min_gap = std::llround(config.period / trace.step);
  audit.min_interval = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < trace.event_log.size(); ++i) {
    const long long gap = grid(trace.event_log[i]) - grid(trace.event_log[i - 1]);
    audit.intervals_ok = audit.intervals_ok && gap >= min_gap;
    audit.min_interval = std::min(audit.min_interval, trace.event_log[i] - trace.event_log[i - 1]);
  }
  for (const auto& check : trace.checks) {
    for (double rho : {check.rho_before, check.rho_after}) {
      audit.rho_in_bounds = audit.rho_in_bounds && rho >= config.rho_lo && rho <= config.rho_hi;
    }
    if (check.decision == TriggerDecision::kTransmit) {
      audit.reset_zero = audit.reset_zero && check.lhs_after == 0.0;
    }
  }
  return audit;
}

bool ReproOutcome::hard_gates_pass() const {
  for (const auto& gate : gates) {
    if (gate.hard && !gate.passed) return false;
  }
  return true;
}

ReproOutcome run_repro(const ScenarioConfig& base, bool parallel) {
  ReproOutcome out;
  out.synthesis = synthesize(base);
  resolve_partition(base, out.synthesis);
  const GainSet& gains = out.synthesis.candidates.principal_gains();
  out.runs = run_variants(base, gains, out.synthesis.augmented,
                          {Variant::kEidOn, Variant::kEidOff, Variant::kStatic, Variant::kStepDisturbance},
                          parallel);
  const RunOutcome& on = out.runs[0];
  const RunOutcome& off = out.runs[1];
  const RunOutcome& stat = out.runs[2];
  const RunOutcome& step = out.runs[3];
  auto& gates = out.gates;

  const auto& cert = out.synthesis.certificate;
  const MatrixXd& k = out.synthesis.candidates.riccati;
  const double asym = (k - k.transpose()).norm();
  const double min_eig = Eigen::SelfAdjointEigenSolver<MatrixXd>(0.5 * (k + k.transpose())).eigenvalues()(0);
  gates.push_back(make_gate("synthesis certificate", true,
                            cert.residual < 1e-9 && cert.hurwitz && asym <= 1e-12 * k.norm() &&
                                min_eig >= -1e-9 * k.norm(),
                            "residual " + fmt(cert.residual) + ", hurwitz " + (cert.hurwitz ? "yes" : "no") +
                                ", partition " + std::string(to_string(gains.partition))));
  const double dev = gain_deviation(gains);
  gates.push_back(make_gate("published gains", false, dev <= 0.05, "max relative deviation " + fmt(dev)));

  const MetricsReport on_w = compute_metrics(on.trace, {12.0, 18.0});
  const MetricsReport off_w = compute_metrics(off.trace, {12.0, 18.0});
  auto dominates = [](const MetricsReport& a, const MetricsReport& b) {
    return a.rmse < b.rmse && a.mse < b.mse && a.mae < b.mae;
  };
  gates.push_back(make_gate("EID dominance, full run", true, dominates(on.metrics, off.metrics),
                            "rmse " + fmt(on.metrics.rmse) + " vs " + fmt(off.metrics.rmse)));
  gates.push_back(make_gate("EID dominance, [12, 18] s", true, dominates(on_w, off_w),
                            "rmse " + fmt(on_w.rmse) + " vs " + fmt(off_w.rmse)));
  const auto in_band = [](double value, double ref) { return value >= 0.5 * ref && value <= 2.0 * ref; };
  gates.push_back(make_gate("published index band", false,
                            in_band(on.metrics.rmse, kPublishedProposed.rmse) &&
                                in_band(on.metrics.mse, kPublishedProposed.mse) &&
                                in_band(on.metrics.mae, kPublishedProposed.mae),
                            "rmse/mse/mae " + fmt(on.metrics.rmse) + "/" + fmt(on.metrics.mse) + "/" +
                                fmt(on.metrics.mae)));
  const double contrast = safe_ratio(off_w.max_abs_error, on_w.max_abs_error);
  gates.push_back(make_gate("aperiodic contrast >= 2", true, contrast >= 2.0,
                            "max|eps| off " + fmt(off_w.max_abs_error) + ", on " + fmt(on_w.max_abs_error) +
                                ", ratio " + fmt(contrast)));

  const double t_step = base.step_disturbance.time;
  const double post = max_abs_error_after(step.trace, t_step);
  const double settle = settle_time(step.trace, t_step, 0.1);
  gates.push_back(make_gate("step disturbance peak < 0.2", true, post < 0.2, "max|eps| " + fmt(post)));
  gates.push_back(make_gate("step disturbance settles within 4 s", true, settle <= 4.0,
                            "settle " + fmt(settle) + " s"));

  const TriggerAudit audit = audit_trigger(on.trace, base.trigger);
  gates.push_back(make_gate("trigger invariants", true, audit.intervals_ok && audit.rho_in_bounds && audit.reset_zero,
                            "min interval " + fmt(audit.min_interval) + " s"));
  const double interval_ratio = safe_ratio(on.metrics.min_interval, stat.metrics.min_interval);
  gates.push_back(make_gate("adaptive events <= static", false, on.metrics.event_count <= stat.metrics.event_count,
                            std::to_string(on.metrics.event_count) + " vs " +
                                std::to_string(stat.metrics.event_count) + ", min-interval ratio " +
                                fmt(interval_ratio) + " (published claim 20)"));

  std::vector<LabeledReport> reports;
  for (const auto& run : out.runs) reports.push_back({run.label, run.metrics});
  out.comparison = compare_runs(reports);
  return out;
}

std::string format_gates(const std::vector<Gate>& gates) {
  std::ostringstream out;
  for (const auto& gate : gates) {
    const char* status = gate.passed ? "PASS" : (gate.hard ? "FAIL" : "SOFT");
    out << status << "  " << gate.name << "  (" << gate.detail << ")\n";
  }
  return out.str();
}

}  // namespace omrc
