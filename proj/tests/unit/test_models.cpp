/*
 Copyright 2026 The rlr Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "rlr/models/building.hpp"
#include "rlr/models/compressor.hpp"
#include "rlr/models/example1.hpp"
#include "rlr/models/linear.hpp"
#include "rlr/models/saturation.hpp"
#include "rlr/ocp/rollout.hpp"
#include "rlr/validation/validation.hpp"
#include "unit/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace rlr {
namespace {

using models::Scale;
using models::SaturationForm;

ocp::DecisionVectord zero_decision(const ocp::ProblemDefinition& p)
{
  return {Eigen::VectorXd::Zero(p.dims.n_q), Eigen::VectorXd::Zero(p.dims.n_r), 0.0};
}

void expect_monotone_with_asymptotes(const Eigen::Vector4d& beta, double lower, double upper)
{
  const auto [lo, hi] = models::saturation_asymptotes(beta, SaturationForm::offset);
  const double range = upper - lower;
  EXPECT_NEAR(lo, lower, 0.01 * range);
  EXPECT_NEAR(hi, upper, 0.01 * range);
  double previous = -std::numeric_limits<double>::infinity();
  for (int i = -400; i <= 400; ++i) {
    const double u = i * (2.0 / beta(2)) / 100.0;
    const double v = models::smooth_saturation(u, beta);
    EXPECT_GE(v, previous);
    EXPECT_GE(v, lower - 1e-9 * range);
    EXPECT_LE(v, upper + 1e-9 * range);
    previous = v;
  }
}

TEST(Saturation, BuildingFitIsPinnedAndMonotone)
{
  expect_monotone_with_asymptotes(models::building_fitted_beta(), -500.0, 1200.0);
}

TEST(Saturation, CompressorFitsArePinnedAndMonotone)
{
  expect_monotone_with_asymptotes(models::compressor_fitted_torque_beta(), 0.0, 1000.0);
  expect_monotone_with_asymptotes(models::compressor_fitted_recycle_beta(), 0.0, 1.0);
}

TEST(Saturation, ValueAtZeroIsFrozen)
{
  EXPECT_NEAR(models::smooth_saturation(0.0, models::building_fitted_beta()), -72.505429455264448,
              1e-9);
  EXPECT_NEAR(models::smooth_saturation(0.0, models::compressor_fitted_torque_beta()),
              66.045169096352922, 1e-9);
}

TEST(Saturation, FitTracksTheClampAwayFromTheCorners)
{
  const Eigen::Vector4d beta = models::fit_saturation(-500.0, 1200.0);
  EXPECT_NEAR(models::smooth_saturation(-5000.0, beta), -500.0, 1.0);
  EXPECT_NEAR(models::smooth_saturation(5000.0, beta), 1200.0, 1.0);
}

TEST(Saturation, PrintedFormIsAvailable)
{
  const auto [lo, hi] =
      models::saturation_asymptotes(models::building_printed_beta(), SaturationForm::printed);
  EXPECT_TRUE(std::isfinite(lo));
  EXPECT_TRUE(std::isfinite(hi));
  EXPECT_NE(lo, hi);
}

TEST(Building, DimensionsAtBothScales)
{
  const auto paper = models::building_problem(Scale::paper);
  EXPECT_EQ(paper.dims.horizon, 192);
  EXPECT_EQ(paper.dims.n_x, 3);
  EXPECT_EQ(paper.dims.n_w, 3);
  EXPECT_EQ(paper.dims.n_d, 14);
  EXPECT_EQ(paper.dims.n_q, 192);
  EXPECT_EQ(paper.dims.n_r, 1);
  EXPECT_EQ(paper.dims.n_g, 2);
  const auto desk = models::building_problem(Scale::desk);
  EXPECT_EQ(desk.dims.horizon, 24);
  EXPECT_EQ(desk.dims.n_d, 14);
}

TEST(Building, UncertaintyBox)
{
  const auto p = models::building_problem(Scale::desk);
  for (int i = 0; i < 12; ++i) {
    EXPECT_DOUBLE_EQ(p.bounds.d_lower(i), 0.98);
    EXPECT_DOUBLE_EQ(p.bounds.d_upper(i), 1.02);
  }
  for (int i = 12; i < 14; ++i) {
    EXPECT_EQ(p.bounds.d_lower(i), -1.0);
    EXPECT_EQ(p.bounds.d_upper(i), 1.0);
  }
  EXPECT_EQ(p.bounds.w_lower.rows(), 24);
}

TEST(Building, ComfortBandFollowsTheSchedule)
{
  const auto params = models::building_parameters(Scale::desk);
  const models::BuildingModel model(params);
  int day = 0;
  for (int k = 0; k < params.horizon; ++k) {
    const bool daytime = models::building_daytime(params, k);
    day += daytime;
    EXPECT_EQ(model.t_min[std::size_t(k)], daytime ? 23.0 : 17.0) << "k = " << k;
  }
  EXPECT_EQ(day, 12);
  EXPECT_TRUE(models::building_daytime(params, 0));

  Eigen::VectorXd x(3), u(1), w(3), d(14);
  x << 22.0, 20.0, 20.0;
  u << 0.0;
  w.setZero();
  d.setOnes();
  const Eigen::VectorXd g = model.constraints<double>(0, x, u, w, d);
  EXPECT_DOUBLE_EQ(g(0), 1.0);
  EXPECT_DOUBLE_EQ(g(1), -4.0);
}

TEST(Building, ZeroPolicyMatchesLinearRecursion)
{
  const auto params = models::building_parameters(Scale::desk);
  const auto p = models::building_problem(params);
  ocp::Scenariod s = p.bounds.center();
  s.d.head(12).setOnes();
  s.d.tail(2).setZero();
  const auto z = ocp::rollout(p, zero_decision(p), s);
  const double u0 = models::smooth_saturation(0.0, params.saturation_beta);
  const Eigen::MatrixXd u = Eigen::MatrixXd::Constant(params.horizon, 1, u0);
  const Eigen::MatrixXd expected =
      test::linear_recursion(params.A, params.B, params.W, params.x0, u, s.w);
  EXPECT_LE((z.x - expected).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Building, DynamicsAreAffineInStateAndDisturbance)
{
  const auto params = models::building_parameters(Scale::desk);
  const models::BuildingModel model(params);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-30.0, 30.0);
  auto random = [&](int n) { return Eigen::VectorXd(Eigen::VectorXd::NullaryExpr(n, [&](Index) { return U(rng); })); };
  Eigen::VectorXd d = Eigen::VectorXd::Ones(14);
  d(3) = 1.01;
  d(10) = 0.99;
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(1, 350.0);
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXd x1 = random(3), x2 = random(3), w1 = random(3), w2 = random(3);
    const double a = U(rng) / 30.0;
    const Eigen::VectorXd lhs =
        model.dynamics<double>(0, a * x1 + (1 - a) * x2, u, a * w1 + (1 - a) * w2, d);
    const Eigen::VectorXd rhs =
        a * model.dynamics<double>(0, x1, u, w1, d) + (1 - a) * model.dynamics<double>(0, x2, u, w2, d);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Building, RolloutInputsStayWithinTheActuatorRange)
{
  const auto params = models::building_parameters(Scale::desk);
  const auto p = models::building_problem(params);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> offset(-20000.0, 20000.0);
  std::uniform_real_distribution<double> gain(params.gain_lower, params.gain_upper);
  const double slack = 0.01 * (params.input_upper - params.input_lower);
  for (std::uint64_t t = 0; t < 10; ++t) {
    ocp::DecisionVectord dec = zero_decision(p);
    dec.q = Eigen::VectorXd::NullaryExpr(p.dims.n_q, [&](Index) { return offset(rng); });
    dec.r(0) = gain(rng);
    const auto z = ocp::rollout(p, dec, validation::sample_scenario(p.bounds, 9, t));
    for (int k = 0; k < p.dims.horizon; ++k) {
      const double applied = models::smooth_saturation(z.u(k, 0), params.saturation_beta);
      EXPECT_GE(applied, params.input_lower - slack);
      EXPECT_LE(applied, params.input_upper + slack);
    }
  }
}

TEST(Compressor, PressureRatioAtReferencePoint)
{
  const auto params = models::compressor_parameters(Scale::desk);
  const Eigen::VectorXd alpha = params.alpha;
  EXPECT_NEAR(models::pressure_ratio<double>(100.0, 700.0, alpha), 47.391, 1e-9);
}

TEST(Compressor, DimensionsAndBox)
{
  const auto p = models::compressor_problem(Scale::desk);
  EXPECT_EQ(p.dims.n_d, 9);
  EXPECT_EQ(p.dims.n_w, 0);
  EXPECT_EQ(p.dims.n_r, 2);
  EXPECT_EQ(p.dims.n_g, 4);
  for (int i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(p.bounds.d_lower(i), 0.95);
    EXPECT_DOUBLE_EQ(p.bounds.d_upper(i), 1.05);
  }
  for (int i = 3; i < 9; ++i) {
    EXPECT_DOUBLE_EQ(p.bounds.d_lower(i), 0.98);
    EXPECT_DOUBLE_EQ(p.bounds.d_upper(i), 1.02);
  }
  EXPECT_EQ(models::compressor_problem(Scale::paper).dims.horizon, 200);
}

// Heun integration of the compressor written out from the parameter values.
Eigen::MatrixXd compressor_oracle(const models::CompressorParameters& c, const Eigen::VectorXd& x0,
                                  double torque, int steps)
{
  auto pos = [&](double v) { return 0.5 * (v + std::sqrt(v * v + c.sqrt_smoothing * c.sqrt_smoothing)); };
  auto sat = [](double u, const Eigen::Vector4d& b) { return b(0) / (b(1) + std::exp(-b(2) * u)) + b(3); };
  const double gs = c.sound_speed * c.sound_speed / c.suction_volume / c.pascal_per_bar;
  const double gd = c.sound_speed * c.sound_speed / c.discharge_volume / c.pascal_per_bar;
  const double gm = c.duct_area / c.duct_length * c.pascal_per_bar;
  auto f = [&](const Eigen::VectorXd& x) {
    const double ps = x(0), pd = x(1), m = x(2), om = x(3), mr = x(4), ir = x(6);
    const double min = 0.4 * c.inlet_valve * std::sqrt(pos(c.inlet_pressure - ps));
    const double mout = 0.8 * c.outlet_valve * std::sqrt(pos(pd - c.outlet_pressure));
    const double e = c.recycle_setpoint - m;
    const double urec = sat(c.recycle_kp * e + c.recycle_ki * ir, c.recycle_beta);
    const double msp = c.recycle_valve * urec * std::sqrt(pos(pd - ps));
    const auto& a = c.alpha;
    const double pi = a(0) + a(1) * m + a(2) * om + a(3) * m * om + a(4) * m * m + a(5) * om * om;
    Eigen::VectorXd dx(7);
    dx << gs * (min - m + mr), gd * (m - mout - mr), gm * (pi * ps - pd),
        (torque - c.reaction_torque_coefficient * m * om) / c.inertia, (msp - mr) / c.recycle_time_constant,
        m - c.mass_flow_target, e;
    return dx;
  };
  Eigen::MatrixXd out(steps + 1, 7);
  Eigen::VectorXd x = x0;
  out.row(0) = x.transpose();
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = f(x);
    const Eigen::VectorXd k2 = f(x + c.step * k1);
    x = x + 0.5 * c.step * (k1 + k2);
    out.row(k + 1) = x.transpose();
  }
  return out;
}

TEST(Compressor, ZeroGainsMatchIndependentSimulation)
{
  const auto params = models::compressor_parameters(Scale::desk);
  const auto p = models::compressor_problem(params);
  const auto z = ocp::rollout(p, zero_decision(p), p.bounds.center());
  const double torque = models::smooth_saturation(0.0, params.torque_beta);
  const Eigen::MatrixXd expected = compressor_oracle(params, p.x0, torque, p.dims.horizon);
  for (Index k = 0; k < expected.rows(); ++k) {
    for (Index i = 0; i < 7; ++i) {
      EXPECT_NEAR(z.x(k, i), expected(k, i), 1e-9 * (1.0 + std::abs(expected(k, i))))
          << "k = " << k << ", i = " << i;
    }
  }
}

TEST(Compressor, HeunIsSecondOrder)
{
  auto params = models::compressor_parameters(Scale::desk);
  params.final_time = 10.0;
  Eigen::VectorXd finals[3];
  for (int level = 0; level < 3; ++level) {
    params.step = 0.5 / double(1 << level);
    const auto p = models::compressor_problem(params);
    // Zero gains hold the torque constant, so only the integration error remains.
    const auto z = ocp::rollout(p, zero_decision(p), p.bounds.center());
    finals[level] = z.x.bottomRows(1).transpose();
  }
  const double e1 = (finals[0] - finals[1]).norm();
  const double e2 = (finals[1] - finals[2]).norm();
  ASSERT_GT(e2, 0.0);
  EXPECT_NEAR(e1 / e2, 4.0, 1.0);
}

TEST(Example1, EndpointsOfTheParameterBox)
{
  const auto p = models::example1_problem();
  const auto at = [&](double d) {
    return ocp::rollout(p, zero_decision(p), {Eigen::MatrixXd(5, 0), Eigen::VectorXd::Constant(1, d)})
        .x(5, 0);
  };
  EXPECT_NEAR(at(0.5), 1.0, 1e-15);
  EXPECT_NEAR(at(-0.5), -1.0, 1e-15);
}

TEST(Linear, OpenLoopRolloutMatchesRecursion)
{
  models::LinearModelSpec spec;
  spec.horizon = 4;
  spec.A = Eigen::Matrix2d{{0.9, 0.2}, {-0.1, 0.8}};
  spec.B = Eigen::Vector2d(0.0, 1.0);
  spec.W = Eigen::Matrix2d::Identity();
  spec.A_d = {Eigen::Matrix2d{{0.1, 0.0}, {0.0, 0.0}}};
  spec.x0 = Eigen::Vector2d(1.0, -1.0);
  spec.w_lower = Eigen::Vector2d(-0.1, -0.1);
  spec.w_upper = Eigen::Vector2d(0.1, 0.1);
  spec.d_lower = Eigen::VectorXd::Constant(1, -1.0);
  spec.d_upper = Eigen::VectorXd::Constant(1, 1.0);
  spec.feedback = false;
  const auto p = models::linear_problem(spec);
  ocp::DecisionVectord dec = zero_decision(p);
  dec.q << 0.5, -0.25, 1.0, 0.0;
  const auto s = validation::sample_scenario(p.bounds, 2, 0);
  const auto z = ocp::rollout(p, dec, s);
  const Eigen::MatrixXd A = spec.A + s.d(0) * spec.A_d[0];
  const Eigen::MatrixXd expected = test::linear_recursion(A, spec.B, spec.W, spec.x0, dec.q, s.w);
  EXPECT_LE((z.x - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Linear, MalformedShapesAreRejected)
{
  models::LinearModelSpec spec;
  spec.A = Eigen::Matrix2d::Identity();
  spec.B = Eigen::Vector3d::Ones();
  EXPECT_THROW(models::linear_problem(spec), PreconditionError);
}

}  // namespace
}  // namespace rlr
