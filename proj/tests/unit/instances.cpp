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

#include "unit/instances.hpp"

#include "rlr/nlp/nlp.hpp"
#include "rlr/ocp/rollout.hpp"
#include "unit/oracles.hpp"

#include <cmath>
#include <random>

namespace rlr::test {

RandomInstance random_linear_instance(unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(1, 2);
  const int n_x = pick(rng);
  const int n_d = pick(rng);

  models::LinearModelSpec spec;
  spec.name = "random";
  spec.horizon = 2 + pick(rng);
  spec.A = 0.6 * Eigen::MatrixXd::NullaryExpr(n_x, n_x, [&](Index, Index) { return U(rng); });
  spec.B = Eigen::MatrixXd::NullaryExpr(n_x, 1, [&](Index, Index) { return U(rng); });
  for (int i = 0; i < n_d; ++i) {
    spec.A_d.push_back(0.4 * Eigen::MatrixXd::NullaryExpr(n_x, n_x, [&](Index, Index) { return U(rng); }));
    spec.B_d.push_back(0.4 * Eigen::MatrixXd::NullaryExpr(n_x, 1, [&](Index, Index) { return U(rng); }));
  }
  spec.x0 = Eigen::VectorXd::NullaryExpr(n_x, [&](Index) { return U(rng); });
  spec.w_lower = spec.w_upper = Eigen::VectorXd(0);
  spec.d_lower = Eigen::VectorXd::Constant(n_d, -1.0);
  spec.d_upper = Eigen::VectorXd::Constant(n_d, 1.0);
  const Eigen::MatrixXd L = Eigen::MatrixXd::NullaryExpr(n_x, n_x, [&](Index, Index) { return U(rng); });
  spec.Q = 0.1 * L * L.transpose();
  spec.R = Eigen::MatrixXd::Constant(1, 1, 0.05);
  spec.P = spec.Q;
  spec.x_upper = Eigen::VectorXd::NullaryExpr(n_x, [&](Index) { return 0.5 + 0.5 * U(rng); });
  spec.feedback = false;

  RandomInstance out{models::linear_problem(spec), {}};
  out.decision.q = Eigen::VectorXd::NullaryExpr(out.problem.dims.n_q, [&](Index) { return U(rng); });
  out.decision.r = Eigen::VectorXd(0);
  out.decision.gamma = U(rng);
  return out;
}

double grid_G_max(const ocp::ProblemDefinition& problem, const ocp::DecisionVectord& decision,
                  int points)
{
  const auto& b = problem.bounds;
  const int n_d = problem.dims.n_d;
  const int per_axis = int(std::lround(std::pow(double(points), 1.0 / n_d)));
  const auto G = [&](const Eigen::VectorXd& d) {
    const ocp::Scenariod s{Eigen::MatrixXd(problem.dims.horizon, 0), d};
    return ocp::evaluate_scenario(problem, decision, s).value;
  };
  return grid_max(G, b.d_lower, b.d_upper, per_axis).value;
}

models::LinearModelSpec two_step_toy()
{
  models::LinearModelSpec spec;
  spec.name = "toy";
  spec.horizon = 2;
  spec.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
  spec.B = Eigen::MatrixXd::Constant(1, 1, 1.0);
  spec.A_d = {Eigen::MatrixXd::Constant(1, 1, 1.0)};
  spec.x0 = Eigen::VectorXd::Constant(1, 1.0);
  spec.w_lower = spec.w_upper = Eigen::VectorXd(0);
  spec.d_lower = Eigen::VectorXd::Constant(1, -0.5);
  spec.d_upper = Eigen::VectorXd::Constant(1, 0.5);
  spec.Q = Eigen::MatrixXd::Constant(1, 1, 1.0);
  spec.R = Eigen::MatrixXd::Constant(1, 1, 0.1);
  spec.P = Eigen::MatrixXd::Constant(1, 1, 1.0);
  spec.x_upper = Eigen::VectorXd::Constant(1, 0.5);
  spec.feedback = false;
  return spec;
}

double lifted_gamma(const models::LinearModelSpec& toy, const std::vector<double>& parameters)
{
  // Variables: q_0, q_1, gamma, then x_1, x_2 for each scenario.
  const int S = int(parameters.size());
  const double a = toy.A(0, 0), b = toy.B(0, 0), ad = toy.A_d[0](0, 0), x0 = toy.x0(0);
  const double Q = toy.Q(0, 0), R = toy.R(0, 0), P = toy.P(0, 0), xmax = toy.x_upper(0);
  nlp::NlpProblem p;
  p.n = 3 + 2 * S;
  p.objective = [](const nlp::Vector& z) { return z(2); };
  p.inequality = [=](const nlp::Vector& z) {
    nlp::Vector c(7 * S);
    for (int i = 0; i < S; ++i) {
      const double m = a + ad * parameters[std::size_t(i)];
      const double x1 = z(3 + 2 * i), x2 = z(4 + 2 * i);
      const double r1 = x1 - (m * x0 + b * z(0));
      const double r2 = x2 - (m * x1 + b * z(1));
      const double cost = Q * x0 * x0 + R * z(0) * z(0) + Q * x1 * x1 + R * z(1) * z(1) + P * x2 * x2;
      c.segment(7 * i, 7) << r1, -r1, r2, -r2, x1 - xmax, x2 - xmax, cost - z(2);
    }
    return c;
  };
  p.box_lower = nlp::Vector::Constant(p.n, -toy.offset_bound);
  p.box_upper = nlp::Vector::Constant(p.n, toy.offset_bound);
  p.box_lower(2) = -1e6;
  p.box_upper(2) = 1e6;
  nlp::NlpOptions options;
  options.tolerance = 1e-10;
  options.max_outer_iterations = 300;
  const auto result = nlp::minimize(p, nlp::Vector::Zero(p.n), options);
  return result.x_star(2);
}

}  // namespace rlr::test
