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

#ifndef RLR_MODELS_LINEAR_HPP
#define RLR_MODELS_LINEAR_HPP

#include "rlr/ocp/problem.hpp"

#include <string>
#include <vector>

namespace rlr::models {

/// Linear system with parameters entering affinely:
///
///   x+ = (A + sum_i d_i A_i) x + (B + sum_i d_i B_i) u + W w,   u_k = K x_k + q_k,
///   J  = sum_k x_k' Q x_k + u_k' R u_k + x_N' P x_N.
///
/// Constraints are the finite entries of the state bounds (applied to x_{k+1}) and of the
/// input bounds (applied to u_k). K and q are optional parts of the decision.
struct LinearModelSpec {
  std::string name = "linear";
  int horizon = 1;
  Eigen::MatrixXd A, B, W;
  std::vector<Eigen::MatrixXd> A_d;  // one per parameter; an empty matrix means zero
  std::vector<Eigen::MatrixXd> B_d;
  Eigen::VectorXd x0;
  Eigen::VectorXd w_lower, w_upper;
  Eigen::VectorXd d_lower, d_upper;
  Eigen::MatrixXd Q, R, P;
  Eigen::VectorXd x_lower, x_upper;
  Eigen::VectorXd u_lower, u_upper;
  bool feedback = true;
  bool offsets = true;
  double gain_bound = 100.0;
  double offset_bound = 100.0;
};

/// Checks shapes and fills defaults (zero W, Q, R, P, unbounded states and inputs).
LinearModelSpec normalized(const LinearModelSpec& spec);

ocp::ProblemDefinition linear_problem(const LinearModelSpec& spec);

}  // namespace rlr::models

#endif  // RLR_MODELS_LINEAR_HPP
