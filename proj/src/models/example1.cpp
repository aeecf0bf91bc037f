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

#include "rlr/models/example1.hpp"

#include <memory>

namespace rlr::models {

ocp::ProblemDefinition example1_problem(const Example1Model& model)
{
  const int N = static_cast<int>(model.u_fixed.size());
  ocp::ProblemDefinition p;
  p.name = "example1";
  p.dims = {N, 1, 1, 0, 1, N, 0, 1};
  p.x0 = Eigen::VectorXd::Zero(1);
  p.bounds.w_lower = Eigen::MatrixXd::Zero(N, 0);
  p.bounds.w_upper = Eigen::MatrixXd::Zero(N, 0);
  p.bounds.d_lower = Eigen::VectorXd::Constant(1, -0.5);
  p.bounds.d_upper = Eigen::VectorXd::Constant(1, 0.5);
  p.decision_bounds.q_lower = Eigen::VectorXd::Constant(N, -10.0);
  p.decision_bounds.q_upper = Eigen::VectorXd::Constant(N, 10.0);
  p.decision_bounds.r_lower = Eigen::VectorXd(0);
  p.decision_bounds.r_upper = Eigen::VectorXd(0);
  p.initial_decision.q = Eigen::VectorXd::Zero(N);
  p.initial_decision.r = Eigen::VectorXd(0);
  p.initial_decision.gamma = 0.0;
  p.constraint_names = {"x_next"};
  p.constraint_active = [N](int k, int /*h*/) { return k == N - 1; };
  ocp::attach_model(p, std::make_shared<const Example1Model>(model));
  p.validate();
  return p;
}

}  // namespace rlr::models
