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

#include "rlr/ocp/rollout.hpp"

#include <cmath>
#include <sstream>

namespace rlr::ocp {

Rolloutd rollout(const ProblemDefinition& problem, const DecisionVectord& decision,
                 const Scenariod& scenario)
{
  problem.check_decision(decision);
  problem.check_scenario(scenario);
  return simulate<double>(problem, decision, scenario);
}

namespace {

void require_derivatives(const ProblemDefinition& problem)
{
  if (!problem.has_derivatives()) {
    throw PreconditionError("problem '" + problem.name + "' provides no derivative functions");
  }
}

}  // namespace

Rollout<ADScalar> rollout_decision_derivatives(const ProblemDefinition& problem,
                                               const DecisionVectord& decision,
                                               const Scenariod& scenario)
{
  require_derivatives(problem);
  const auto& dims = problem.dims;
  const Index total = dims.decision_size();
  DecisionVector<ADScalar> ad_decision{seed_variables(decision.q, 0, total),
                                       seed_variables(decision.r, dims.n_q, total),
                                       ADScalar(decision.gamma, Eigen::VectorXd::Zero(total))};
  Scenario<ADScalar> ad_scenario;
  ad_scenario.w = scenario.w.cast<ADScalar>();
  for (Index i = 0; i < ad_scenario.w.size(); ++i)
    ad_scenario.w(i).derivatives() = Eigen::VectorXd::Zero(total);
  ad_scenario.d = constant_variables(scenario.d, total);
  return simulate<ADScalar>(problem, ad_decision, ad_scenario);
}

Rollout<ADScalar> rollout_scenario_derivatives(const ProblemDefinition& problem,
                                               const DecisionVectord& decision,
                                               const Scenariod& scenario)
{
  require_derivatives(problem);
  const auto& dims = problem.dims;
  const Index total = dims.scenario_size();
  DecisionVector<ADScalar> ad_decision{constant_variables(decision.q, total),
                                       constant_variables(decision.r, total),
                                       ADScalar(decision.gamma, Eigen::VectorXd::Zero(total))};
  Scenario<ADScalar> ad_scenario;
  ad_scenario.w.resize(dims.horizon, dims.n_w);
  Index offset = 0;
  for (Index k = 0; k < dims.horizon; ++k) {
    for (Index j = 0; j < dims.n_w; ++j, ++offset) {
      ad_scenario.w(k, j) = ADScalar(scenario.w(k, j), Eigen::VectorXd::Unit(total, offset));
    }
  }
  ad_scenario.d = seed_variables(scenario.d, offset, total);
  return simulate<ADScalar>(problem, ad_decision, ad_scenario);
}

GEvaluation max_constraint(const Rolloutd& rollout)
{
  GEvaluation best;
  best.component = GComponent::constraint;
  for (Index k = 0; k < rollout.g_values.rows(); ++k) {
    for (Index h = 0; h < rollout.g_values.cols(); ++h) {
      const double v = rollout.g_values(k, h);
      if (v > best.value || std::isnan(v)) {
        best.value = v;
        best.step = int(k);
        best.row = int(h);
        if (std::isnan(v)) return best;
      }
    }
  }
  return best;
}

GEvaluation evaluate_G(const ProblemDefinition& problem, const Rolloutd& rollout, double gamma)
{
  if (rollout.g_values.rows() != problem.dims.horizon ||
      rollout.g_values.cols() != problem.dims.n_g) {
    throw PreconditionError("rollout does not match the problem dimensions");
  }
  GEvaluation best = max_constraint(rollout);
  const double epigraph = rollout.cost - gamma;
  if (epigraph > best.value || std::isnan(epigraph)) {
    best.value = epigraph;
    best.component = GComponent::cost;
    best.step = -1;
    best.row = -1;
  }
  return best;
}

GEvaluation evaluate_scenario(const ProblemDefinition& problem, const DecisionVectord& decision,
                              const Scenariod& scenario)
{
  try {
    return evaluate_G(problem, rollout(problem, decision, scenario), decision.gamma);
  } catch (const DivergedRollout& e) {
    GEvaluation diverged;
    diverged.value = std::numeric_limits<double>::infinity();
    diverged.component = GComponent::constraint;
    diverged.step = e.step();
    return diverged;
  }
}

GMaxResult evaluate_G_max(const ProblemDefinition& problem, const DecisionVectord& decision,
                          std::span<const Scenariod> scenarios)
{
  if (scenarios.empty()) throw PreconditionError("evaluate_G_max needs a nonempty scenario set");
  GMaxResult best{-std::numeric_limits<double>::infinity(), 0, scenarios.front(), {}};
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const GEvaluation g = evaluate_scenario(problem, decision, scenarios[i]);
    if (i == 0 || g.value > best.value) {
      best.value = g.value;
      best.index = i;
      best.where = g;
    }
  }
  best.scenario = scenarios[best.index];
  return best;
}

std::string describe(const ProblemDefinition& problem, const GEvaluation& where)
{
  if (where.component == GComponent::cost) return "cost";
  if (where.row < 0) return "diverged@" + std::to_string(where.step);
  std::ostringstream os;
  if (std::size_t(where.row) < problem.constraint_names.size()) {
    os << problem.constraint_names[where.row];
  } else {
    os << "g" << where.row;
  }
  os << "@" << where.step;
  return os.str();
}

}  // namespace rlr::ocp
