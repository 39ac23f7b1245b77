#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "omrc/apetm.hpp"

namespace omrc {
namespace {

TriggerConfig config(TriggerMode mode = TriggerMode::kAdaptive) {
  TriggerConfig c = TriggerConfig::with_identity_weights(3);
  c.mode = mode;
  return c;
}

TEST(SaturateTest, Examples) {
  EXPECT_EQ(saturate(0.5, 0, 1), 0.5);
  EXPECT_EQ(saturate(-3, 0, 1), 0.0);
  EXPECT_EQ(saturate(7, 0, 1), 1.0);
  try {
    saturate(0.5, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidBounds);
  }
}

TEST(TriggerTest, InitialState) {
  TriggerState trig(config(), VectorXd::Zero(3));
  EXPECT_TRUE(trig.held_value().isZero(0));
  ASSERT_EQ(trig.event_log().size(), 1u);
  EXPECT_EQ(trig.event_log()[0], 0.0);
  EXPECT_EQ(trig.threshold(), 0.01);
}

TEST(TriggerTest, DecisionExamples) {
  const VectorXd v0 = (VectorXd(3) << 0.2, -0.1, 0.4).finished();
  TriggerState same(config(TriggerMode::kStatic), v0);
  EXPECT_EQ(same.check_and_update(v0, 0.5), TriggerDecision::kHold);

  TriggerState zero_rhs(config(TriggerMode::kStatic), VectorXd::Unit(3, 0));
  EXPECT_EQ(zero_rhs.check_and_update(VectorXd::Zero(3), 0.5), TriggerDecision::kTransmit);
  EXPECT_EQ(zero_rhs.checks().back().lhs, 1.0);
  EXPECT_EQ(zero_rhs.checks().back().rhs, 0.0);

  TriggerState close(config(TriggerMode::kStatic), VectorXd::Unit(3, 0));
  EXPECT_EQ(close.check_and_update((VectorXd(3) << 1.01, 0, 0).finished(), 1.0), TriggerDecision::kHold);
  EXPECT_NEAR(close.checks().back().lhs, 1e-4, 1e-15);
  EXPECT_NEAR(close.checks().back().rhs, 0.01 * 1.0201, 1e-15);
}

TEST(TriggerTest, HeldValueSurvivesHolds) {
  const VectorXd v0 = (VectorXd(3) << 1, 2, 3).finished();
  TriggerState trig(config(), VectorXd::Zero(3));
  ASSERT_EQ(trig.check_and_update(v0, 0.5), TriggerDecision::kTransmit);
  EXPECT_EQ(trig.held_value(), v0);
  for (int k = 2; k <= 4; ++k) {
    ASSERT_EQ(trig.check_and_update(v0 * 1.0001, 0.5 * k), TriggerDecision::kHold);
  }
  EXPECT_EQ(trig.held_value(), v0);
}

TEST(TriggerTest, ThresholdUpdate) {
  TriggerConfig c = config();
  c.rho0 = 0.5;
  // held^T held = 2, last^T last = 1, and the check itself holds.
  TriggerState trig(c, (VectorXd(3) << std::sqrt(2.0), 0, 0).finished());
  ASSERT_EQ(trig.check_and_update(VectorXd::Unit(3, 0), 0.5), TriggerDecision::kHold);
  EXPECT_NEAR(trig.threshold(), 0.51, 1e-15);

  TriggerState unchanged(config(TriggerMode::kStatic), VectorXd::Unit(3, 1));
  unchanged.check_and_update(VectorXd::Unit(3, 1), 0.5);
  EXPECT_EQ(unchanged.update_threshold(), 0.01);

  c.rho0 = 0.98;
  c.kappa = 0.22;
  // Unclamped update would be 0.98 + 0.22 * (2 - 1) = 1.2.
  TriggerState clamp(c, (VectorXd(3) << std::sqrt(2.0), 0, 0).finished());
  ASSERT_EQ(clamp.check_and_update(VectorXd::Unit(3, 0), 0.5), TriggerDecision::kHold);
  EXPECT_EQ(clamp.threshold(), 0.99);
}

TEST(TriggerTest, OffGridCheck) {
  TriggerState trig(config(), VectorXd::Zero(3));
  try {
    trig.check_and_update(VectorXd::Zero(3), 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotOnGrid);
  }
}

TEST(TriggerTest, ConfigValidation) {
  TriggerConfig c = config();
  c.rho_lo = 0.0;
  EXPECT_THROW(c.validate(3), Error);
  c = config();
  c.psi1(0, 0) = -1.0;
  EXPECT_THROW(c.validate(3), Error);
  c = config();
  EXPECT_THROW(TriggerState(config(TriggerMode::kContinuous), VectorXd::Zero(3)), Error);
  EXPECT_NO_THROW(c.validate(3));
}

// Random walks: threshold stays in bounds, resets are exact, holds satisfy
// the condition as evaluated, and events are at least T1 apart.
TEST(TriggerTest, RandomWalkInvariants) {
  std::mt19937 rng(21);
  std::normal_distribution<> g(0, 1);
  for (int walk = 0; walk < 50; ++walk) {
    TriggerConfig c = config();
    c.kappa = std::uniform_real_distribution<>(0, 1)(rng);
    TriggerState trig(c, VectorXd::Zero(3));
    VectorXd x = VectorXd::Zero(3);
    for (int k = 1; k <= 200; ++k) {
      x += 0.3 * VectorXd::NullaryExpr(3, [&] { return g(rng); });
      trig.check_and_update(x, 0.5 * k);
      const TriggerCheck& chk = trig.checks().back();
      EXPECT_GE(trig.threshold(), c.rho_lo);
      EXPECT_LE(trig.threshold(), c.rho_hi);
      if (chk.decision == TriggerDecision::kTransmit) {
        EXPECT_EQ(chk.lhs_after, 0.0);
      } else {
        EXPECT_LE(chk.lhs, chk.rhs);
      }
    }
    const auto& log = trig.event_log();
    for (std::size_t i = 1; i < log.size(); ++i) EXPECT_GE(log[i] - log[i - 1], 0.5);
  }
}

TEST(TriggerTest, ZeroKappaMatchesStatic) {
  std::mt19937 rng(8);
  std::normal_distribution<> g(0, 1);
  TriggerConfig adaptive = config();
  adaptive.kappa = 0.0;
  TriggerState a(adaptive, VectorXd::Zero(3));
  TriggerState s(config(TriggerMode::kStatic), VectorXd::Zero(3));
  for (int k = 1; k <= 500; ++k) {
    const VectorXd x = VectorXd::NullaryExpr(3, [&] { return g(rng); });
    EXPECT_EQ(a.check_and_update(x, 0.5 * k), s.check_and_update(x, 0.5 * k));
  }
  EXPECT_EQ(a.event_log(), s.event_log());
}

}  // namespace
}  // namespace omrc
