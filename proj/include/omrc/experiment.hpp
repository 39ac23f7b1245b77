#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omrc/analysis_io.hpp"
#include "omrc/config.hpp"
#include "omrc/sim_engine.hpp"
#include "omrc/synthesis.hpp"

namespace omrc {

/// Scenario variants derived from one base config by flag toggles.
enum class Variant { kEidOn, kEidOff, kAdaptive, kStatic, kContinuous, kStepDisturbance };

std::string_view to_string(Variant variant);
/// Accepts eid_on, eid_off, adaptive, static, continuous, step_disturbance.
Variant parse_variant(std::string_view name);

/// Returns the config with the variant's toggles applied. kStatic pins the
/// threshold at rho0 (kappa is irrelevant there).
ScenarioConfig apply_variant(ScenarioConfig config, Variant variant);

struct SynthesisOutcome {
  AugmentedSystem augmented;
  GainCandidates candidates;
  ClosedLoopReport certificate;
  MatrixXd observer_gain;
  double seconds = 0.0;  // wall time of the Riccati solve and extraction
};

/// Builds the augmented model, resolves the observer gain (given or placed)
/// and solves the Riccati equation. Errors propagate unchanged.
SynthesisOutcome synthesize(const ScenarioConfig& config);

Scenario make_scenario(const ScenarioConfig& config, const GainSet& gains, const AugmentedSystem& augmented);

struct RunOutcome {
  std::string label;
  Trace trace;
  MetricsReport metrics;  // full window, realized cost filled in
  double seconds = 0.0;
};

RunOutcome run_config(const ScenarioConfig& config, const GainSet& gains, const AugmentedSystem& augmented,
                      std::string label = "run");

/// Fixes the gain partition. kAuto simulates both partitions on the base
/// config and keeps the one with the smaller full-window RMSE; a diverging
/// candidate always loses. The choice is written into `outcome.candidates`.
KPartition resolve_partition(const ScenarioConfig& config, SynthesisOutcome& outcome);

/// Runs the listed variants of `config`, optionally concurrently. Results keep
/// the input order.
std::vector<RunOutcome> run_variants(const ScenarioConfig& config, const GainSet& gains,
                                     const AugmentedSystem& augmented, const std::vector<Variant>& variants,
                                     bool parallel);

/// Printed gains of the reference design, for deviation reports only.
struct PublishedGains {
  std::vector<double> k_p{-5.0118, 0.1947, 47.4};
  double k_c = 247.25;
};

/// max_i |a_i - b_i| / |b_i| over the gain entries.
double gain_deviation(const GainSet& gains, const PublishedGains& published = {});

struct Gate {
  std::string name;
  bool hard = true;
  bool passed = false;
  std::string detail;
};

/// Largest |eps| on the samples with t > after (strictly).
double max_abs_error_after(const Trace& trace, double after);
/// Seconds after `after` until |eps| stays inside `band` for good; 0 when it
/// never leaves, infinity when it has not settled by the end of the trace.
double settle_time(const Trace& trace, double after, double band);

struct TriggerAudit {
  bool intervals_ok = true;  // every inter-event gap >= T1 on the step grid
  bool rho_in_bounds = true;
  bool reset_zero = true;    // lhs_after == 0 for every transmitting check
  double min_interval = 0.0;
};
TriggerAudit audit_trigger(const Trace& trace, const TriggerConfig& config);

/// The reproduction suite: proposed, no-EID, static-PETM and step-disturbance
/// runs plus the gate table evaluated on them.
struct ReproOutcome {
  SynthesisOutcome synthesis;
  std::vector<RunOutcome> runs;  // eid_on, eid_off, static, step_disturbance
  std::vector<Gate> gates;
  Comparison comparison;

  bool hard_gates_pass() const;
};

ReproOutcome run_repro(const ScenarioConfig& base, bool parallel);

std::string format_gates(const std::vector<Gate>& gates);

}  // namespace omrc
