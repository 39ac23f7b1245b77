#include "omrc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>

#include "omrc/numerics/linalg.hpp"

#ifndef OMRC_CONFIG_DIR
#define OMRC_CONFIG_DIR "configs"
#endif

namespace omrc {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw_error(ErrorKind::kConfigError, what); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      config_error("unknown key '" + key + "' in " + where);
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) config_error("missing key '" + std::string(key) + "' in " + where);
  return obj.at(key);
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) config_error(where + " must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) config_error(where + " must be finite");
  return x;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

MatrixXd matrix(const json& value, const std::string& where) {
  if (value.is_number()) return MatrixXd::Constant(1, 1, number(value, where));
  if (!value.is_array() || value.empty()) config_error(where + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(value.size());
  const auto cols = static_cast<Eigen::Index>(value.front().is_array() ? value.front().size() : 0);
  if (cols == 0) config_error(where + " must be an array of non-empty rows");
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = value[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      config_error(where + " has ragged rows");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = number(row[static_cast<std::size_t>(j)], where);
    }
  }
  return m;
}

json matrix_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void require_dims(const MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (m.rows() != rows || m.cols() != cols) {
    config_error(where + " must be " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                 std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_spd(const MatrixXd& m, const std::string& where) {
  if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm()) ||
      Eigen::LLT<MatrixXd>(m).info() != Eigen::Success) {
    config_error(where + " must be symmetric positive definite");
  }
}

void require_integral(double span, double step, const std::string& what) {
  const double ratio = span / step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    config_error(what + " must be an integer multiple of sim.h");
  }
}

std::vector<SineTerm> parse_terms(const json& value, const std::string& where) {
  if (!value.is_array()) config_error(where + " must be an array");
  std::vector<SineTerm> terms;
  for (const auto& item : value) {
    check_keys(item, {"amplitude", "angular_frequency"}, where);
    terms.push_back({number(require(item, "amplitude", where), where + ".amplitude"),
                     number(require(item, "angular_frequency", where), where + ".angular_frequency")});
  }
  return terms;
}

json terms_json(const std::vector<SineTerm>& terms) {
  json out = json::array();
  for (const auto& term : terms) {
    out.push_back({{"amplitude", term.amplitude}, {"angular_frequency", term.angular_frequency}});
  }
  return out;
}

SignalSpec parse_signal(const json& value, const std::string& where) {
  check_keys(value, {"components"}, where);
  SignalSpec spec;
  if (!value.contains("components")) return spec;
  const json& components = value.at("components");
  if (!components.is_array()) config_error(where + ".components must be an array");
  for (const auto& item : components) {
    const std::string kind = require(item, "kind", where).get<std::string>();
    const std::string at = where + "." + kind;
    if (kind == "zero") {
      check_keys(item, {"kind"}, at);
      spec.components.emplace_back(ZeroSignal{});
    } else if (kind == "sum_of_sines") {
      check_keys(item, {"kind", "terms"}, at);
      spec.components.emplace_back(SumOfSines{parse_terms(require(item, "terms", at), at + ".terms")});
    } else if (kind == "windowed_sum_of_sines") {
      check_keys(item, {"kind", "window", "terms"}, at);
      const json& window = require(item, "window", at);
      if (!window.is_array() || window.size() != 2) config_error(at + ".window must be [t_start, t_end]");
      spec.components.emplace_back(WindowedSumOfSines{number(window[0], at + ".window"),
                                                      number(window[1], at + ".window"),
                                                      parse_terms(require(item, "terms", at), at + ".terms")});
    } else if (kind == "step") {
      check_keys(item, {"kind", "time", "amplitude"}, at);
      spec.components.emplace_back(StepSignal{number(require(item, "time", at), at + ".time"),
                                              number(require(item, "amplitude", at), at + ".amplitude")});
    } else {
      config_error("unknown signal kind '" + kind + "' in " + where);
    }
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    config_error(where + ": " + e.what());
  }
  return spec;
}

json signal_json(const SignalSpec& spec) {
  json components = json::array();
  for (const auto& component : spec.components) {
    if (std::holds_alternative<ZeroSignal>(component)) {
      components.push_back({{"kind", "zero"}});
    } else if (const auto* s = std::get_if<SumOfSines>(&component)) {
      components.push_back({{"kind", "sum_of_sines"}, {"terms", terms_json(s->terms)}});
    } else if (const auto* w = std::get_if<WindowedSumOfSines>(&component)) {
      components.push_back({{"kind", "windowed_sum_of_sines"},
                            {"window", {w->t_start, w->t_end}},
                            {"terms", terms_json(w->terms)}});
    } else if (const auto* st = std::get_if<StepSignal>(&component)) {
      components.push_back({{"kind", "step"}, {"time", st->time}, {"amplitude", st->amplitude}});
    }
  }
  return {{"components", components}};
}

TriggerMode parse_mode(const std::string& text) {
  if (text == "adaptive") return TriggerMode::kAdaptive;
  if (text == "static") return TriggerMode::kStatic;
  if (text == "continuous") return TriggerMode::kContinuous;
  config_error("trigger.mode must be adaptive, static or continuous, got '" + text + "'");
}

PartitionChoice parse_partition(const std::string& text) {
  if (text == "auto") return PartitionChoice::kAuto;
  if (text == "last_column") return PartitionChoice::kLastColumn;
  if (text == "error_column") return PartitionChoice::kErrorColumn;
  config_error("synthesis.partition must be auto, last_column or error_column, got '" + text + "'");
}

MatrixXd weight_matrix(const json& value, Eigen::Index n, const std::string& where) {
  if (value.is_string()) {
    if (value.get<std::string>() != "identity") config_error(where + " must be a matrix or \"identity\"");
    return MatrixXd::Identity(n, n);
  }
  return matrix(value, where);
}

bool parse_bool(const json& value, const std::string& where) {
  if (!value.is_boolean()) config_error(where + " must be true or false");
  return value.get<bool>();
}

}  // namespace

std::string_view to_string(PartitionChoice choice) {
  switch (choice) {
    case PartitionChoice::kAuto: return "auto";
    case PartitionChoice::kLastColumn: return "last_column";
    case PartitionChoice::kErrorColumn: return "error_column";
  }
  return "auto";
}

std::string_view to_string(TriggerMode mode) {
  switch (mode) {
    case TriggerMode::kAdaptive: return "adaptive";
    case TriggerMode::kStatic: return "static";
    case TriggerMode::kContinuous: return "continuous";
  }
  return "adaptive";
}

LtiPlant ScenarioConfig::plant() const {
  return b_omega ? LtiPlant(a, b, c, *b_omega) : LtiPlant(a, b, c);
}

ScenarioConfig parse_config(const json& doc) {
  check_keys(doc, {"plant", "mrc", "eid", "observer", "trigger", "synthesis", "signals", "sim", "preview",
                   "numerics"},
             "config");
  ScenarioConfig cfg;

  const json& plant = require(doc, "plant", "config");
  check_keys(plant, {"A", "B", "C", "B_omega"}, "plant");
  cfg.a = matrix(require(plant, "A", "plant"), "plant.A");
  const Eigen::Index n = cfg.a.rows();
  require_dims(cfg.a, n, n, "plant.A");
  cfg.b = matrix(require(plant, "B", "plant"), "plant.B");
  if (cfg.b.rows() != n) config_error("plant.B must have " + std::to_string(n) + " rows");
  const Eigen::Index m = cfg.b.cols();
  cfg.c = matrix(require(plant, "C", "plant"), "plant.C");
  if (cfg.c.cols() != n) config_error("plant.C must have " + std::to_string(n) + " columns");
  const Eigen::Index p = cfg.c.rows();
  if (plant.contains("B_omega")) {
    cfg.b_omega = matrix(plant.at("B_omega"), "plant.B_omega");
    if (cfg.b_omega->rows() != n) config_error("plant.B_omega must have " + std::to_string(n) + " rows");
  }
  try {
    (void)cfg.plant();
  } catch (const Error& e) {
    config_error(std::string("plant: ") + e.what());
  }

  if (doc.contains("mrc")) {
    const json& mrc = doc.at("mrc");
    check_keys(mrc, {"w_a", "T"}, "mrc");
    cfg.w_a = number_or(mrc, "w_a", cfg.w_a, "mrc");
    cfg.period = number_or(mrc, "T", cfg.period, "mrc");
  }
  if (!(cfg.w_a > 0.0)) config_error("mrc.w_a must be positive");
  if (!(cfg.period > 0.0)) config_error("mrc.T must be positive");

  if (doc.contains("eid")) {
    const json& eid = doc.at("eid");
    check_keys(eid, {"w_f", "enabled"}, "eid");
    cfg.w_f = number_or(eid, "w_f", cfg.w_f, "eid");
    if (eid.contains("enabled")) cfg.eid_enabled = parse_bool(eid.at("enabled"), "eid.enabled");
  }
  if (!(cfg.w_f > 0.0)) config_error("eid.w_f must be positive");

  const json& observer = require(doc, "observer", "config");
  check_keys(observer, {"L", "poles"}, "observer");
  if (observer.contains("L") == observer.contains("poles")) {
    config_error("observer needs exactly one of L or poles");
  }
  if (observer.contains("L")) {
    cfg.observer_gain = matrix(observer.at("L"), "observer.L");
    require_dims(*cfg.observer_gain, n, p, "observer.L");
    if (!is_hurwitz(cfg.a - *cfg.observer_gain * cfg.c)) config_error("observer.L: A - L C is not Hurwitz");
  } else {
    for (const auto& pole : observer.at("poles")) {
      if (pole.is_number()) {
        cfg.observer_poles.emplace_back(number(pole, "observer.poles"), 0.0);
      } else if (pole.is_array() && pole.size() == 2) {
        cfg.observer_poles.emplace_back(number(pole[0], "observer.poles"), number(pole[1], "observer.poles"));
      } else {
        config_error("observer.poles entries must be numbers or [re, im] pairs");
      }
    }
    if (static_cast<Eigen::Index>(cfg.observer_poles.size()) != n) {
      config_error("observer.poles must list " + std::to_string(n) + " poles");
    }
  }

  cfg.trigger = TriggerConfig::with_identity_weights(n);
  if (doc.contains("trigger")) {
    const json& trig = doc.at("trigger");
    check_keys(trig, {"T1", "psi1", "psi2", "rho_lo", "rho_hi", "rho0", "kappa", "mode"}, "trigger");
    cfg.trigger.period = number_or(trig, "T1", cfg.trigger.period, "trigger");
    if (trig.contains("psi1")) cfg.trigger.psi1 = weight_matrix(trig.at("psi1"), n, "trigger.psi1");
    if (trig.contains("psi2")) cfg.trigger.psi2 = weight_matrix(trig.at("psi2"), n, "trigger.psi2");
    cfg.trigger.rho_lo = number_or(trig, "rho_lo", cfg.trigger.rho_lo, "trigger");
    cfg.trigger.rho_hi = number_or(trig, "rho_hi", cfg.trigger.rho_hi, "trigger");
    cfg.trigger.rho0 = number_or(trig, "rho0", cfg.trigger.rho0, "trigger");
    cfg.trigger.kappa = number_or(trig, "kappa", cfg.trigger.kappa, "trigger");
    if (trig.contains("mode")) cfg.trigger.mode = parse_mode(trig.at("mode").get<std::string>());
  }
  require_dims(cfg.trigger.psi1, n, n, "trigger.psi1");
  require_dims(cfg.trigger.psi2, n, n, "trigger.psi2");
  try {
    cfg.trigger.validate(n);
  } catch (const Error& e) {
    config_error(std::string("trigger: ") + e.what());
  }

  const json& synth = require(doc, "synthesis", "config");
  check_keys(synth, {"Q_z", "R", "omega_c", "partition"}, "synthesis");
  cfg.q_z = matrix(require(synth, "Q_z", "synthesis"), "synthesis.Q_z");
  require_dims(cfg.q_z, n + 2, n + 2, "synthesis.Q_z");
  require_spd(cfg.q_z, "synthesis.Q_z");
  cfg.r = matrix(require(synth, "R", "synthesis"), "synthesis.R");
  require_dims(cfg.r, m, m, "synthesis.R");
  if ((cfg.r - cfg.r.transpose()).norm() > 1e-12 * std::max(1.0, cfg.r.norm())) {
    config_error("synthesis.R must be symmetric");
  }
  if (synth.contains("omega_c")) cfg.omega_c = number(synth.at("omega_c"), "synthesis.omega_c");
  if (synth.contains("partition")) cfg.partition = parse_partition(synth.at("partition").get<std::string>());

  const json& signals = require(doc, "signals", "config");
  check_keys(signals, {"reference", "disturbance", "step_disturbance"}, "signals");
  cfg.reference = parse_signal(require(signals, "reference", "signals"), "signals.reference");
  const Eigen::Index l = cfg.b_omega ? cfg.b_omega->cols() : m;
  if (signals.contains("disturbance")) {
    const json& dist = signals.at("disturbance");
    if (!dist.is_array()) config_error("signals.disturbance must be an array (one signal per channel)");
    for (std::size_t i = 0; i < dist.size(); ++i) {
      cfg.disturbance.push_back(parse_signal(dist[i], "signals.disturbance[" + std::to_string(i) + "]"));
    }
  }
  if (cfg.disturbance.empty()) cfg.disturbance.assign(static_cast<std::size_t>(l), SignalSpec{});
  if (static_cast<Eigen::Index>(cfg.disturbance.size()) != l) {
    config_error("signals.disturbance must list " + std::to_string(l) + " channel(s)");
  }
  if (signals.contains("step_disturbance")) {
    const json& st = signals.at("step_disturbance");
    check_keys(st, {"time", "amplitude", "enabled"}, "signals.step_disturbance");
    cfg.step_disturbance.time = number_or(st, "time", cfg.step_disturbance.time, "signals.step_disturbance");
    cfg.step_disturbance.amplitude =
        number_or(st, "amplitude", cfg.step_disturbance.amplitude, "signals.step_disturbance");
    if (st.contains("enabled")) cfg.step_enabled = parse_bool(st.at("enabled"), "signals.step_disturbance.enabled");
  }

  if (doc.contains("sim")) {
    const json& sim = doc.at("sim");
    check_keys(sim, {"horizon", "h"}, "sim");
    cfg.horizon = number_or(sim, "horizon", cfg.horizon, "sim");
    cfg.step = number_or(sim, "h", cfg.step, "sim");
  }
  if (!(cfg.step > 0.0)) config_error("sim.h must be positive");
  if (!(cfg.horizon >= 0.0)) config_error("sim.horizon must be >= 0");
  require_integral(cfg.period, cfg.step, "mrc.T");
  require_integral(cfg.horizon, cfg.step, "sim.horizon");
  if (cfg.trigger.mode != TriggerMode::kContinuous) require_integral(cfg.trigger.period, cfg.step, "trigger.T1");

  if (doc.contains("preview")) {
    const json& preview = doc.at("preview");
    check_keys(preview, {"t_r", "quad_step"}, "preview");
    cfg.preview.t_r = number_or(preview, "t_r", cfg.preview.t_r, "preview");
    cfg.preview.quad_step = number_or(preview, "quad_step", cfg.preview.quad_step, "preview");
  }
  if (!(cfg.preview.t_r >= 0.0)) config_error("preview.t_r must be >= 0");
  if (!(cfg.preview.quad_step > 0.0)) config_error("preview.quad_step must be positive");

  if (doc.contains("numerics")) {
    const json& num = doc.at("numerics");
    check_keys(num, {"tol_care", "tol_hurwitz"}, "numerics");
    cfg.tol_care = number_or(num, "tol_care", cfg.tol_care, "numerics");
    cfg.tol_hurwitz = number_or(num, "tol_hurwitz", cfg.tol_hurwitz, "numerics");
  }
  return cfg;
}

json to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["plant"] = {{"A", matrix_json(cfg.a)}, {"B", matrix_json(cfg.b)}, {"C", matrix_json(cfg.c)}};
  if (cfg.b_omega) doc["plant"]["B_omega"] = matrix_json(*cfg.b_omega);
  doc["mrc"] = {{"w_a", cfg.w_a}, {"T", cfg.period}};
  doc["eid"] = {{"w_f", cfg.w_f}, {"enabled", cfg.eid_enabled}};
  if (cfg.observer_gain) {
    doc["observer"] = {{"L", matrix_json(*cfg.observer_gain)}};
  } else {
    json poles = json::array();
    for (const auto& pole : cfg.observer_poles) poles.push_back({pole.real(), pole.imag()});
    doc["observer"] = {{"poles", poles}};
  }
  doc["trigger"] = {{"T1", cfg.trigger.period},
                    {"psi1", matrix_json(cfg.trigger.psi1)},
                    {"psi2", matrix_json(cfg.trigger.psi2)},
                    {"rho_lo", cfg.trigger.rho_lo},
                    {"rho_hi", cfg.trigger.rho_hi},
                    {"rho0", cfg.trigger.rho0},
                    {"kappa", cfg.trigger.kappa},
                    {"mode", std::string(to_string(cfg.trigger.mode))}};
  doc["synthesis"] = {{"Q_z", matrix_json(cfg.q_z)},
                      {"R", matrix_json(cfg.r)},
                      {"partition", std::string(to_string(cfg.partition))}};
  if (cfg.omega_c) doc["synthesis"]["omega_c"] = *cfg.omega_c;
  json disturbance = json::array();
  for (const auto& d : cfg.disturbance) disturbance.push_back(signal_json(d));
  doc["signals"] = {{"reference", signal_json(cfg.reference)},
                    {"disturbance", disturbance},
                    {"step_disturbance",
                     {{"time", cfg.step_disturbance.time},
                      {"amplitude", cfg.step_disturbance.amplitude},
                      {"enabled", cfg.step_enabled}}}};
  doc["sim"] = {{"horizon", cfg.horizon}, {"h", cfg.step}};
  doc["preview"] = {{"t_r", cfg.preview.t_r}, {"quad_step", cfg.preview.quad_step}};
  doc["numerics"] = {{"tol_care", cfg.tol_care}, {"tol_hurwitz", cfg.tol_hurwitz}};
  return doc;
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    config_error("override '" + std::string(assignment) + "' must look like key=value");
  }
  std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));

  json value;
  if (text == "on") {
    value = true;
  } else if (text == "off") {
    value = false;
  } else {
    value = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = text;
  }

  static const std::pair<const char*, const char*> kAliases[] = {
      {"eid", "eid.enabled"},          {"mode", "trigger.mode"},   {"horizon", "sim.horizon"},
      {"h", "sim.h"},                  {"partition", "synthesis.partition"},
      {"step", "signals.step_disturbance.enabled"},               {"t_r", "preview.t_r"},
      {"kappa", "trigger.kappa"},      {"rho0", "trigger.rho0"},   {"T1", "trigger.T1"},
      {"omega_c", "synthesis.omega_c"},
  };
  for (const auto& [alias, path] : kAliases) {
    if (key == alias) key = path;
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) config_error("malformed override key '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    json& child = (*node)[part];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) config_error("override path '" + key + "' crosses a non-object");
    node = &child;
    start = dot + 1;
  }
}

std::filesystem::path bundled_config_dir() {
  if (const char* dir = std::getenv("OMRC_CONFIG_DIR")) return dir;
  return OMRC_CONFIG_DIR;
}

json load_config_document(const std::string& path_or_name) {
  std::filesystem::path path(path_or_name);
  if (!std::filesystem::exists(path)) {
    const auto bundled = bundled_config_dir() / (path_or_name + ".json");
    if (std::filesystem::exists(bundled)) path = bundled;
  }
  std::ifstream in(path);
  if (!in) throw_error(ErrorKind::kIoError, "cannot open config '" + path_or_name + "'");
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) config_error("config '" + path.string() + "' is not valid JSON");
  return doc;
}

ScenarioConfig load_config(const std::string& path_or_name, const std::vector<std::string>& overrides) {
  json doc = load_config_document(path_or_name);
  for (const auto& assignment : overrides) apply_override(doc, assignment);
  return parse_config(doc);
}

}  // namespace omrc
