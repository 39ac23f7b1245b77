#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "omrc/plant.hpp"

namespace omrc {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(PlantTest, DerivativeExamples) {
  const LtiPlant plant = rotational_speed_plant();
  const VectorXd zero3 = VectorXd::Zero(3), zero1 = VectorXd::Zero(1);
  EXPECT_TRUE(plant_derivative(plant, zero3, zero1, zero1).isZero(0));
  const VectorXd dx = plant_derivative(plant, VectorXd::Unit(3, 0), zero1, zero1);
  EXPECT_EQ(dx, (VectorXd(3) << -31.31, 0, 1).finished());
  const VectorXd du = plant_derivative(plant, zero3, VectorXd::Ones(1), zero1);
  EXPECT_EQ(du, (VectorXd(3) << 28.06, 0, 0).finished());
  EXPECT_EQ(plant.b_omega(), plant.b());
}

TEST(PlantTest, Output) {
  const LtiPlant plant = rotational_speed_plant();
  EXPECT_EQ(plant_output(plant, (VectorXd(3) << 2, 5, 7).finished())(0), 2.0);
  EXPECT_EQ(plant_output(plant, VectorXd::Zero(3))(0), 0.0);
  MatrixXd a(2, 2);
  a << 0, 1, -1, 0;
  const LtiPlant full(a, MatrixXd::Identity(2, 1), MatrixXd::Identity(2, 2));
  const VectorXd x = (VectorXd(2) << 3, -4).finished();
  EXPECT_EQ(plant_output(full, x), x);
}

TEST(PlantTest, DerivativeIsLinear) {
  const LtiPlant plant = rotational_speed_plant();
  std::mt19937 rng(1);
  std::normal_distribution<> g(0, 1);
  auto rv = [&](int n) { return VectorXd(VectorXd::NullaryExpr(n, [&] { return g(rng); })); };
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd x1 = rv(3), x2 = rv(3), u1 = rv(1), u2 = rv(1), w1 = rv(1), w2 = rv(1);
    const VectorXd lhs = plant_derivative(plant, x1 + x2, u1 + u2, w1 + w2);
    const VectorXd rhs = plant_derivative(plant, x1, u1, w1) + plant_derivative(plant, x2, u2, w2);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, lhs.cwiseAbs().maxCoeff()));
  }
}

TEST(PlantTest, ConstructionChecks) {
  const MatrixXd a = MatrixXd::Identity(2, 2);
  auto kind_of = [](auto&& make) {
    try {
      make();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIoError;
  };
  EXPECT_EQ(kind_of([&] { LtiPlant(a, MatrixXd::Ones(3, 1), MatrixXd::Ones(1, 2)); }),
            ErrorKind::kDimensionMismatch);
  EXPECT_EQ(kind_of([&] { LtiPlant(a, MatrixXd::Ones(2, 1), MatrixXd::Ones(1, 2)); }),
            ErrorKind::kNotControllable);
  MatrixXd b(2, 1);
  b << 1, 2;
  MatrixXd c(1, 2);
  c << 1, 0;
  EXPECT_EQ(kind_of([&] { LtiPlant(a, b, c); }), ErrorKind::kNotControllable);
  MatrixXd shift(2, 2);
  shift << 0, 1, 0, 0;
  EXPECT_EQ(kind_of([&] { LtiPlant(shift, (MatrixXd(2, 1) << 0, 1).finished(), (MatrixXd(1, 2) << 0, 1).finished()); }),
            ErrorKind::kNotObservable);
  MatrixXd nan_a = shift;
  nan_a(0, 0) = std::nan("");
  EXPECT_EQ(kind_of([&] { LtiPlant(nan_a, (MatrixXd(2, 1) << 0, 1).finished(), c); }), ErrorKind::kNonFinite);
}

TEST(SignalTest, Examples) {
  EXPECT_NEAR(eval_signal(periodic_reference(), 0.5), 0.5, 1e-15);
  const SignalSpec d = windowed_disturbance();
  EXPECT_EQ(eval_signal(d, 10.0), 0.0);
  EXPECT_NEAR(eval_signal(d, 6.125), 2.0 + std::sin(30.625 * kPi) + std::sin(36.75 * kPi), 1e-12);
  EXPECT_NEAR(eval_signal(d, 6.125), 3.63099, 1e-5);
  EXPECT_NEAR(eval_signal(d, 13.25), 3.0, 1e-12);
  EXPECT_EQ(eval_signal(SignalSpec{}, 3.0), 0.0);
}

TEST(SignalTest, ReferenceIsPeriodic) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<> t(0, 100);
  const SignalSpec r = periodic_reference();
  for (int i = 0; i < 1000; ++i) {
    const double s = t(rng);
    EXPECT_LT(std::abs(eval_signal(r, s) - eval_signal(r, s + 2.0)), 1e-12);
  }
}

TEST(SignalTest, DisturbanceVanishesOutsideWindows) {
  const SignalSpec d = windowed_disturbance();
  for (int k = -1000; k <= 30000; ++k) {
    const double t = k * 1e-3;
    const bool inside = (t >= 6.0 && t <= 8.0) || (t >= 12.0 && t <= 18.0);
    if (!inside) EXPECT_EQ(eval_signal(d, t), 0.0) << t;
  }
}

TEST(SignalTest, StepAndDerivative) {
  SignalSpec s{{StepSignal{21.0, 4.5}}};
  EXPECT_EQ(eval_signal(s, 20.999), 0.0);
  EXPECT_EQ(eval_signal(s, 21.0), 4.5);
  EXPECT_FALSE(s.is_smooth());
  const SignalSpec r = periodic_reference();
  EXPECT_TRUE(r.is_smooth());
  EXPECT_NEAR(eval_signal_derivative(r, 0.0, 1e-6), kPi + kPi + 1.5 * kPi, 1e-12);
}

TEST(SignalTest, Validation) {
  EXPECT_THROW((SignalSpec{{WindowedSumOfSines{8.0, 6.0, {{1.0, 1.0}}}}}.validate()), Error);
  EXPECT_THROW((SignalSpec{{SumOfSines{{{1.0, -1.0}}}}}.validate()), Error);
}

}  // namespace
}  // namespace omrc
