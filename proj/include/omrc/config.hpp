#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "omrc/apetm.hpp"
#include "omrc/plant.hpp"
#include "omrc/sim_engine.hpp"

namespace omrc {

enum class PartitionChoice { kAuto, kLastColumn, kErrorColumn };

/// Human-editable scenario description (JSON). Every matrix is
/// dimension-checked at load, grid divisibility is enforced and unknown keys
/// are rejected.
struct ScenarioConfig {
  // plant
  MatrixXd a, b, c;
  std::optional<MatrixXd> b_omega;
  // mrc
  double w_a = 100.0;
  double period = 2.0;
  // eid
  double w_f = 100.0;
  bool eid_enabled = true;
  // observer: exactly one of gain / poles
  std::optional<MatrixXd> observer_gain;
  std::vector<std::complex<double>> observer_poles;
  // trigger
  TriggerConfig trigger;
  // synthesis
  MatrixXd q_z;
  MatrixXd r;
  std::optional<double> omega_c;  // defaults to w_a
  PartitionChoice partition = PartitionChoice::kAuto;
  // signals
  SignalSpec reference;
  std::vector<SignalSpec> disturbance;
  StepSignal step_disturbance{21.0, 4.5};
  bool step_enabled = false;
  // sim
  double horizon = 25.0;
  double step = 1e-4;
  PreviewConfig preview;
  // numerics
  double tol_care = kTolCare;
  double tol_hurwitz = kTolHurwitz;

  double effective_omega_c() const { return omega_c.value_or(w_a); }
  LtiPlant plant() const;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
nlohmann::json to_json(const ScenarioConfig& config);

/// Applies one `key=value` override to a raw config document. Short aliases
/// (eid, mode, horizon, h, partition, step, t_r, kappa, rho0, T1) map onto
/// their sections; any other key is a dotted path such as trigger.kappa.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Reads a config file (or a bundled name such as "paper_eq28") and applies
/// overrides in order; later overrides win over earlier ones and over the file.
ScenarioConfig load_config(const std::string& path_or_name, const std::vector<std::string>& overrides = {});
nlohmann::json load_config_document(const std::string& path_or_name);

std::filesystem::path bundled_config_dir();

std::string_view to_string(PartitionChoice choice);
std::string_view to_string(TriggerMode mode);

}  // namespace omrc
