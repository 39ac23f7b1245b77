#include <gtest/gtest.h>

#include "omrc/experiment.hpp"
#include "omrc/numerics/linalg.hpp"

namespace omrc {
namespace {

nlohmann::json bundled() { return load_config_document("paper_eq28"); }

ErrorKind parse_error_kind(const nlohmann::json& doc, std::string* message = nullptr) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  return ErrorKind::kIoError;
}

TEST(ConfigTest, BundledScenario) {
  const ScenarioConfig c = load_config("paper_eq28");
  EXPECT_EQ(c.a(0, 2), -2.83e4);
  EXPECT_EQ(c.b(0, 0), 28.06);
  EXPECT_EQ(c.w_a, 100.0);
  EXPECT_EQ(c.period, 2.0);
  EXPECT_EQ(c.trigger.period, 0.5);
  EXPECT_TRUE(c.trigger.psi1.isIdentity(0));
  EXPECT_EQ(c.q_z(3, 3), 20000.0);
  EXPECT_EQ(c.r(0, 0), 1.0);
  ASSERT_TRUE(c.observer_gain.has_value());
  EXPECT_EQ((*c.observer_gain)(1, 0), 2.215);
  EXPECT_EQ(c.disturbance.size(), 1u);
  EXPECT_FALSE(c.step_enabled);
  EXPECT_EQ(c.step_disturbance.time, 21.0);
  EXPECT_EQ(c.step_disturbance.amplitude, 4.5);
  EXPECT_NEAR(eval_signal(c.reference, 0.5), 0.5, 1e-12);
  EXPECT_NEAR(eval_signal(c.disturbance[0], 6.125), 3.63099, 1e-5);
}

TEST(ConfigTest, RoundTrip) {
  const ScenarioConfig a = parse_config(bundled());
  const ScenarioConfig b = parse_config(to_json(a));
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.b, b.b);
  EXPECT_EQ(a.c, b.c);
  EXPECT_EQ(*a.observer_gain, *b.observer_gain);
  EXPECT_EQ(a.q_z, b.q_z);
  EXPECT_EQ(a.r, b.r);
  EXPECT_EQ(a.trigger.psi1, b.trigger.psi1);
  EXPECT_EQ(a.trigger.kappa, b.trigger.kappa);
  EXPECT_EQ(a.trigger.mode, b.trigger.mode);
  EXPECT_EQ(a.step, b.step);
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(to_json(a), to_json(b));
  for (double t : {0.3, 6.7, 13.1}) EXPECT_EQ(eval_signal(a.disturbance[0], t), eval_signal(b.disturbance[0], t));
}

TEST(ConfigTest, RejectsUnknownKeys) {
  nlohmann::json doc = bundled();
  doc["trigger"]["kapa"] = 0.1;
  std::string message;
  EXPECT_EQ(parse_error_kind(doc, &message), ErrorKind::kConfigError);
  EXPECT_NE(message.find("kapa"), std::string::npos);
  doc = bundled();
  doc["extra"] = 1;
  EXPECT_EQ(parse_error_kind(doc), ErrorKind::kConfigError);
}

TEST(ConfigTest, RejectsIndefiniteQz) {
  nlohmann::json doc = bundled();
  doc["synthesis"]["Q_z"][4][4] = -1.0;
  std::string message;
  EXPECT_EQ(parse_error_kind(doc, &message), ErrorKind::kConfigError);
  EXPECT_NE(message.find("Q_z"), std::string::npos);
}

TEST(ConfigTest, SingularRSurfacesAtSynthesis) {
  const ScenarioConfig c = load_config("paper_eq28", {"synthesis.R=[[0]]"});
  try {
    synthesize(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingular);
  }
}

TEST(ConfigTest, DimensionAndGridChecks) {
  nlohmann::json doc = bundled();
  doc["observer"]["L"] = {{1.0}, {2.0}};
  EXPECT_EQ(parse_error_kind(doc), ErrorKind::kConfigError);
  doc = bundled();
  doc["sim"]["h"] = 3e-4;
  EXPECT_EQ(parse_error_kind(doc), ErrorKind::kConfigError);
  doc = bundled();
  doc["signals"]["disturbance"].push_back(doc["signals"]["disturbance"][0]);
  EXPECT_EQ(parse_error_kind(doc), ErrorKind::kConfigError);
  doc = bundled();
  doc["observer"]["L"] = {{-100.0}, {0.0}, {0.0}};
  EXPECT_EQ(parse_error_kind(doc), ErrorKind::kConfigError);
}

TEST(ConfigTest, OverridePrecedence) {
  const ScenarioConfig c = load_config("paper_eq28", {"eid=off", "mode=static", "h=1e-3", "horizon=4",
                                                      "trigger.kappa=0.5", "kappa=0.25", "step=on"});
  EXPECT_FALSE(c.eid_enabled);
  EXPECT_EQ(c.trigger.mode, TriggerMode::kStatic);
  EXPECT_EQ(c.step, 1e-3);
  EXPECT_EQ(c.horizon, 4.0);
  EXPECT_EQ(c.trigger.kappa, 0.25);
  EXPECT_TRUE(c.step_enabled);
  EXPECT_THROW(load_config("paper_eq28", {"mode=sometimes"}), Error);
  EXPECT_THROW(load_config("paper_eq28", {"nonsense"}), Error);
  EXPECT_THROW(load_config("no_such_config"), Error);
}

TEST(ConfigTest, ObserverPoles) {
  nlohmann::json doc = bundled();
  doc["observer"] = {{"poles", {-200.0, -250.0, -300.0}}};
  const ScenarioConfig c = parse_config(doc);
  EXPECT_FALSE(c.observer_gain.has_value());
  const SynthesisOutcome s = synthesize(c);
  const auto spectrum = eigenvalues(c.a - s.observer_gain * c.c);
  double lo = 0.0;
  for (const auto& z : spectrum) lo = std::min(lo, z.real());
  EXPECT_NEAR(lo, -300.0, 1e-6);
  doc["observer"]["L"] = {{1.0}, {1.0}, {1.0}};
  EXPECT_EQ(parse_error_kind(doc), ErrorKind::kConfigError);
}

TEST(ExperimentTest, Variants) {
  const ScenarioConfig base = load_config("paper_eq28");
  EXPECT_EQ(parse_variant("step_disturbance"), Variant::kStepDisturbance);
  EXPECT_THROW(parse_variant("fast"), Error);
  EXPECT_FALSE(apply_variant(base, Variant::kEidOff).eid_enabled);
  EXPECT_EQ(apply_variant(base, Variant::kStatic).trigger.mode, TriggerMode::kStatic);
  EXPECT_EQ(apply_variant(base, Variant::kContinuous).trigger.mode, TriggerMode::kContinuous);
  EXPECT_TRUE(apply_variant(base, Variant::kStepDisturbance).step_enabled);
  const SynthesisOutcome s = synthesize(base);
  const Scenario sc = make_scenario(apply_variant(base, Variant::kStepDisturbance), s.candidates.error_column,
                                    s.augmented);
  EXPECT_EQ(eval_signal(sc.disturbance[0], 22.0), 4.5);
  EXPECT_EQ(eval_signal(sc.disturbance[0], 20.0), 0.0);
}

TEST(ExperimentTest, PublishedGainDeviation) {
  GainSet g;
  g.k_p = (MatrixXd(1, 3) << -5.0118, 0.1947, 47.4).finished();
  g.k_c = MatrixXd::Constant(1, 1, 247.25);
  EXPECT_EQ(gain_deviation(g), 0.0);
  g.k_c(0, 0) *= 1.1;
  EXPECT_NEAR(gain_deviation(g), 0.1, 1e-12);
}

TEST(ExperimentTest, ErrorEnvelopeHelpers) {
  Trace trace;
  trace.step = 1.0;
  trace.resize(8, 1, 1, 1);
  const std::vector<double> eps{0, 0, 0.5, -0.3, 0.05, 0.2, 0.01, 0.0};
  for (std::size_t k = 0; k < eps.size(); ++k) {
    trace.t[k] = static_cast<double>(k);
    trace.eps[k] = eps[k];
  }
  EXPECT_EQ(max_abs_error_after(trace, 1.0), 0.5);
  EXPECT_EQ(max_abs_error_after(trace, 4.0), 0.2);
  EXPECT_EQ(settle_time(trace, 1.0, 0.1), 5.0);  // last excursion at t = 5
  EXPECT_EQ(settle_time(trace, 5.0, 0.1), 0.0);
  trace.eps.back() = 1.0;
  EXPECT_TRUE(std::isinf(settle_time(trace, 1.0, 0.1)));
}

}  // namespace
}  // namespace omrc
