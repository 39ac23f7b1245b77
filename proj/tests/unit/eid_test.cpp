#include <cmath>

#include <gtest/gtest.h>

#include "omrc/eid.hpp"
#include "omrc/plant.hpp"

namespace omrc {
namespace {

MatrixXd paper_gain() { return (MatrixXd(3, 1) << 0.52, 2.215, -0.245).finished(); }

TEST(EidTest, DefaultFilter) {
  const EidState eid = make_eid(rotational_speed_plant().b(), 100.0);
  EXPECT_EQ(eid.a_f(0, 0), -100.0);
  EXPECT_EQ(eid.b_f(0, 0), 100.0);
  EXPECT_EQ(eid.c_f(0, 0), 1.0);
  EXPECT_LT((eid.b_plus * rotational_speed_plant().b() - MatrixXd::Identity(1, 1)).norm(), 1e-12);
  // Unit DC gain: -C_f A_f^{-1} B_f.
  EXPECT_NEAR((-eid.c_f * eid.a_f.inverse() * eid.b_f)(0, 0), 1.0, 1e-9);
}

TEST(EidTest, EstimateExamples) {
  const EidState eid = make_eid(rotational_speed_plant().b(), 100.0);
  const VectorXd y = VectorXd::Constant(1, 0.3);
  EXPECT_EQ(eid_estimate(eid, paper_gain(), y, y, VectorXd::Zero(1))(0), 0.0);
  EXPECT_EQ(eid_estimate(eid, paper_gain(), y, y, VectorXd::Constant(1, 0.4))(0), 0.4);
  const double w = eid_estimate(eid, paper_gain(), VectorXd::Ones(1), VectorXd::Zero(1), VectorXd::Zero(1))(0);
  EXPECT_NEAR(w, 0.52 / 28.06, 1e-15);
  EXPECT_NEAR(w, 0.018532, 1e-6);
}

TEST(EidTest, FilterDerivativeExamples) {
  EidState eid = make_eid(rotational_speed_plant().b(), 100.0);
  EXPECT_EQ(eid_filter_derivative(eid, VectorXd::Zero(1))(0), 0.0);
  EXPECT_EQ(eid_filter_derivative(eid, VectorXd::Ones(1))(0), 100.0);
  eid.x_f = VectorXd::Ones(1);
  EXPECT_EQ(eid_filter_derivative(eid, VectorXd::Ones(1))(0), 0.0);
}

TEST(EidTest, TotalControl) {
  EidState eid = make_eid(rotational_speed_plant().b(), 100.0);
  eid.x_f = VectorXd::Constant(1, 0.25);
  EXPECT_EQ(total_control(VectorXd::Ones(1), eid)(0), 0.75);
  eid.x_f = VectorXd::Constant(1, -0.5);
  EXPECT_EQ(total_control(VectorXd::Zero(1), eid)(0), 0.5);
  eid.enabled = false;
  EXPECT_EQ(total_control(VectorXd::Ones(1), eid)(0), 1.0);
}

TEST(EidTest, ImpulseResponseDecays) {
  const EidState eid = make_eid(rotational_speed_plant().b(), 100.0);
  double previous = std::abs((eid.c_f * eid.b_f)(0, 0));
  for (double t : {0.01, 0.02, 0.05, 0.1}) {
    const double value = std::abs(eid.c_f(0, 0) * std::exp(eid.a_f(0, 0) * t) * eid.b_f(0, 0));
    EXPECT_LT(value, previous);
    previous = value;
  }
}

TEST(EidTest, RejectsUnstableFilter) {
  const MatrixXd one = MatrixXd::Ones(1, 1);
  EXPECT_THROW(make_eid(rotational_speed_plant().b(), one, one, one), Error);
  EXPECT_THROW(make_eid(rotational_speed_plant().b(), -1.0), Error);
}

}  // namespace
}  // namespace omrc
