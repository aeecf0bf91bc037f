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
#include "rlr/models/example1.hpp"
#include "rlr/models/linear.hpp"
#include "rlr/ocp/rollout.hpp"
#include "rlr/validation/validation.hpp"
#include "unit/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <random>

namespace rlr {
namespace {

using models::Scale;

ocp::DecisionVectord zero_decision(const ocp::ProblemDefinition& p)
{
  ocp::DecisionVectord d;
  d.q = Eigen::VectorXd::Zero(p.dims.n_q);
  d.r = Eigen::VectorXd::Zero(p.dims.n_r);
  d.gamma = 0.0;
  return d;
}

ocp::Scenariod scalar_scenario(double d)
{
  return {Eigen::MatrixXd(5, 0), Eigen::VectorXd::Constant(1, d)};
}

// x+ = x, u = 0, with the single constraint g = x - 1 and zero cost.
struct IdentityModel {
  template <typename S>
  VectorX<S> initial_state(const VectorX<S>& d) const
  {
    return VectorX<S>::Constant(1, d(0));
  }
  template <typename S>
  VectorX<S> dynamics(int, const VectorX<S>& x, const VectorX<S>&, const VectorX<S>&,
                      const VectorX<S>&) const
  {
    return x;
  }
  template <typename S>
  VectorX<S> policy(int, const Eigen::Ref<const MatrixX<S>>&, const VectorX<S>&,
                    const VectorX<S>&) const
  {
    return VectorX<S>::Zero(1);
  }
  template <typename S>
  S stage_cost(int, const VectorX<S>&, const VectorX<S>&, const VectorX<S>&, const VectorX<S>&) const
  {
    return S(0.0);
  }
  template <typename S>
  S terminal_cost(const VectorX<S>&, const VectorX<S>&, const VectorX<S>&) const
  {
    return S(0.0);
  }
  template <typename S>
  VectorX<S> constraints(int, const VectorX<S>& x, const VectorX<S>&, const VectorX<S>&,
                         const VectorX<S>&) const
  {
    return VectorX<S>::Constant(1, x(0) - 1.0);
  }
};

// x+ = 1e200 x^2 from x0 = 10: overflows on the second step.
struct ExplodingModel : IdentityModel {
  template <typename S>
  VectorX<S> initial_state(const VectorX<S>&) const
  {
    return VectorX<S>::Constant(1, S(10.0));
  }
  template <typename S>
  VectorX<S> dynamics(int, const VectorX<S>& x, const VectorX<S>&, const VectorX<S>&,
                      const VectorX<S>&) const
  {
    return (1e200 * x.array() * x.array()).matrix();
  }
};

template <typename Model>
ocp::ProblemDefinition tiny_problem(int horizon, double d_lo, double d_hi)
{
  ocp::ProblemDefinition p;
  p.name = "tiny";
  p.dims = {horizon, 1, 1, 0, 1, 0, 0, 1};
  p.x0 = Eigen::VectorXd::Zero(1);
  p.bounds.w_lower = Eigen::MatrixXd(horizon, 0);
  p.bounds.w_upper = Eigen::MatrixXd(horizon, 0);
  p.bounds.d_lower = Eigen::VectorXd::Constant(1, d_lo);
  p.bounds.d_upper = Eigen::VectorXd::Constant(1, d_hi);
  p.decision_bounds.q_lower = p.decision_bounds.q_upper = Eigen::VectorXd(0);
  p.decision_bounds.r_lower = p.decision_bounds.r_upper = Eigen::VectorXd(0);
  p.initial_decision = {Eigen::VectorXd(0), Eigen::VectorXd(0), 0.0};
  p.constraint_names = {"x_max"};
  ocp::attach_model(p, std::make_shared<const Model>());
  p.validate();
  return p;
}

ocp::DecisionVectord random_building_decision(const ocp::ProblemDefinition& p, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> offset(-2000.0, 6000.0);
  std::uniform_real_distribution<double> gain(-300.0, 0.0);
  ocp::DecisionVectord dec = zero_decision(p);
  for (Index i = 0; i < dec.q.size(); ++i) dec.q(i) = offset(rng);
  dec.r(0) = gain(rng);
  dec.gamma = 1e5;
  return dec;
}

TEST(Rollout, Example1WithZeroParameterEndsAtOneAndOneSixteenth)
{
  const auto p = models::example1_problem();
  const auto z = ocp::rollout(p, zero_decision(p), scalar_scenario(0.0));
  EXPECT_NEAR(z.x(5, 0), 1.0625, 1e-15);
  EXPECT_NEAR(z.x(5, 0), test::example1_polynomial(-0.5), 1e-15);
}

TEST(Rollout, Example1MatchesPolynomialAcrossTheBox)
{
  const auto p = models::example1_problem();
  for (double d = -0.5; d <= 0.5; d += 0.05) {
    const auto z = ocp::rollout(p, zero_decision(p), scalar_scenario(d));
    EXPECT_NEAR(z.x(5, 0), test::example1_polynomial(-0.5 + d), 1e-14) << "d = " << d;
  }
}

TEST(Rollout, IdentityDynamicsKeepInitialState)
{
  const auto p = tiny_problem<IdentityModel>(1, -1.0, 1.0);
  const ocp::Scenariod s{Eigen::MatrixXd(1, 0), Eigen::VectorXd::Constant(1, 0.25)};
  const auto z = ocp::rollout(p, p.initial_decision, s);
  ASSERT_EQ(z.x.rows(), 2);
  EXPECT_EQ(z.x(0, 0), 0.25);
  EXPECT_EQ(z.x(1, 0), 0.25);
  EXPECT_EQ(z.cost, 0.0);
}

TEST(Rollout, BuildingFirstStepMatchesMatrixProduct)
{
  auto params = models::building_parameters(Scale::desk);
  const auto p = models::building_problem(params);
  // Offset q_0 chosen so that the saturated input is zero: beta0 / (beta1 + e) = -beta3.
  const Eigen::Vector4d beta = params.saturation_beta;
  const double e = beta(0) / -beta(3) - beta(1);
  ASSERT_GT(e, 0.0);
  ocp::DecisionVectord dec = zero_decision(p);
  dec.q(0) = -std::log(e) / beta(2);

  ocp::Scenariod s = p.bounds.center();
  s.d.head(12).setOnes();
  s.d.tail(2).setZero();
  s.w.row(0) << 5.0, 5.0, 7.0;
  const auto z = ocp::rollout(p, dec, s);

  const Eigen::Vector3d x0(25.0, 24.0, 24.0);
  const Eigen::Vector3d expected = params.A * x0 + params.W * Eigen::Vector3d(5.0, 5.0, 7.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(z.x(1, i), expected(i), 1e-9);
}

TEST(Rollout, BuildingStatesSatisfyTheDynamicsResidual)
{
  const auto p = models::building_problem(Scale::desk);
  std::mt19937_64 rng(7);
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const auto dec = random_building_decision(p, rng);
    const auto s = validation::sample_scenario(p.bounds, 11, trial);
    const auto z = ocp::rollout(p, dec, s);
    for (int k = 0; k < p.dims.horizon; ++k) {
      const Eigen::VectorXd xk = z.x.row(k).transpose();
      const Eigen::VectorXd next =
          p.functions.dynamics(k, xk, z.u.row(k).transpose(), s.w.row(k).transpose(), s.d);
      const double scale = 1.0 + z.x.row(k + 1).cwiseAbs().maxCoeff();
      EXPECT_LE((z.x.row(k + 1).transpose() - next).cwiseAbs().maxCoeff(), 1e-10 * scale);
    }
  }
}

TEST(Rollout, RepeatedCallsAreBitIdentical)
{
  const auto p = models::building_problem(Scale::desk);
  std::mt19937_64 rng(3);
  const auto dec = random_building_decision(p, rng);
  const auto s = validation::sample_scenario(p.bounds, 5, 0);
  const auto a = ocp::rollout(p, dec, s);
  const auto b = ocp::rollout(p, dec, s);
  EXPECT_TRUE((a.x.array() == b.x.array()).all());
  EXPECT_TRUE((a.u.array() == b.u.array()).all());
  EXPECT_EQ(a.cost, b.cost);
}

TEST(Rollout, DecisionDerivativesMatchValues)
{
  const auto p = models::building_problem(Scale::desk);
  std::mt19937_64 rng(5);
  const auto dec = random_building_decision(p, rng);
  const auto s = validation::sample_scenario(p.bounds, 5, 1);
  const auto plain = ocp::rollout(p, dec, s);
  const auto ad = ocp::rollout_decision_derivatives(p, dec, s);
  EXPECT_NEAR(ad.cost.value(), plain.cost, 1e-9 * std::abs(plain.cost));
  EXPECT_EQ(ad.cost.derivatives().size(), p.dims.decision_size());
}

TEST(Rollout, DivergenceReportsTheStep)
{
  const auto p = tiny_problem<ExplodingModel>(4, 0.0, 0.0);
  const ocp::Scenariod s{Eigen::MatrixXd(4, 0), Eigen::VectorXd::Zero(1)};
  try {
    (void)ocp::rollout(p, p.initial_decision, s);
    FAIL() << "expected DivergedRollout";
  } catch (const ocp::DivergedRollout& e) {
    EXPECT_EQ(e.step(), 2);
  }
  const auto g = ocp::evaluate_scenario(p, p.initial_decision, s);
  EXPECT_TRUE(std::isinf(g.value) && g.value > 0);
  EXPECT_EQ(g.step, 2);
}

TEST(EvaluateG, ConstraintEntryWins)
{
  const auto p = tiny_problem<IdentityModel>(3, -1.0, 1.0);
  ocp::Rolloutd z;
  z.g_values = Eigen::MatrixXd::Constant(3, 1, -1.0);
  z.g_values(1, 0) = -0.5;
  z.cost = 0.0;
  const auto g = ocp::evaluate_G(p, z, 2.0);
  EXPECT_EQ(g.value, -0.5);
  EXPECT_EQ(g.component, ocp::GComponent::constraint);
  EXPECT_EQ(g.step, 1);
  EXPECT_EQ(g.row, 0);
}

TEST(EvaluateG, CostResidualWins)
{
  const auto p = tiny_problem<IdentityModel>(2, -1.0, 1.0);
  ocp::Rolloutd z;
  z.g_values = Eigen::MatrixXd::Zero(2, 1);
  z.cost = 5.0;
  const auto g = ocp::evaluate_G(p, z, 3.0);
  EXPECT_EQ(g.value, 2.0);
  EXPECT_EQ(g.component, ocp::GComponent::cost);
}

TEST(EvaluateG, Example1NearTheInteriorMaximum)
{
  const auto p = models::example1_problem();
  auto dec = zero_decision(p);
  dec.gamma = 10.0;
  const auto g = ocp::evaluate_scenario(p, dec, scalar_scenario(0.195));
  EXPECT_NEAR(g.value, test::example1_polynomial(-0.305), 1e-14);
  EXPECT_EQ(g.step, 4);
}

TEST(EvaluateG, AgreesWithDoubleLoopOnBuildingInstances)
{
  const auto p = models::building_problem(Scale::desk);
  std::mt19937_64 rng(19);
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto dec = random_building_decision(p, rng);
    dec.gamma = std::uniform_real_distribution<double>(0.0, 2e5)(rng);
    const auto s = validation::sample_scenario(p.bounds, 23, trial);
    const auto z = ocp::rollout(p, dec, s);
    EXPECT_EQ(ocp::evaluate_G(p, z, dec.gamma).value, test::naive_G(z.g_values, z.cost, dec.gamma));
  }
}

TEST(EvaluateGMax, SingletonEqualsSingleEvaluation)
{
  const auto p = models::example1_problem();
  const auto dec = zero_decision(p);
  const std::vector<ocp::Scenariod> set{scalar_scenario(0.1)};
  const auto m = ocp::evaluate_G_max(p, dec, set);
  EXPECT_EQ(m.value, ocp::evaluate_scenario(p, dec, set[0]).value);
  EXPECT_EQ(m.index, 0u);
}

TEST(EvaluateGMax, PicksTheLargerOfTwo)
{
  const auto p = tiny_problem<IdentityModel>(1, -1.0, 2.0);
  const std::vector<ocp::Scenariod> set{{Eigen::MatrixXd(1, 0), Eigen::VectorXd::Constant(1, 0.7)},
                                        {Eigen::MatrixXd(1, 0), Eigen::VectorXd::Constant(1, 1.7)}};
  const auto m = ocp::evaluate_G_max(p, p.initial_decision, set);
  EXPECT_NEAR(m.value, 0.7, 1e-15);
  EXPECT_EQ(m.index, 1u);
}

TEST(EvaluateGMax, MatchesLoopAndGrowsWithTheSet)
{
  const auto p = models::building_problem(Scale::desk);
  std::mt19937_64 rng(29);
  const auto dec = random_building_decision(p, rng);
  std::vector<ocp::Scenariod> set;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < 6; ++i) {
    set.push_back(validation::sample_scenario(p.bounds, 31, i));
    double loop = -std::numeric_limits<double>::infinity();
    for (const auto& s : set) loop = std::max(loop, ocp::evaluate_scenario(p, dec, s).value);
    const auto m = ocp::evaluate_G_max(p, dec, set);
    EXPECT_EQ(m.value, loop);
    EXPECT_GE(m.value, previous);
    previous = m.value;
  }
}

TEST(EvaluateGMax, RejectsEmptyCollections)
{
  const auto p = models::example1_problem();
  EXPECT_THROW(ocp::evaluate_G_max(p, zero_decision(p), {}), PreconditionError);
}

TEST(Problem, FlattenRoundTrip)
{
  const auto p = models::building_problem(Scale::desk);
  const auto s = validation::sample_scenario(p.bounds, 1, 2);
  const auto back = ocp::unflatten(ocp::flatten(s), p.dims);
  EXPECT_TRUE((back.w.array() == s.w.array()).all());
  EXPECT_TRUE((back.d.array() == s.d.array()).all());
}

TEST(Problem, DecisionLengthMismatchIsRejected)
{
  const auto p = models::example1_problem();
  ocp::DecisionVectord dec = zero_decision(p);
  dec.q.resize(3);
  EXPECT_THROW(p.check_decision(dec), PreconditionError);
}

}  // namespace
}  // namespace rlr
