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

#ifndef RLR_MODELS_EXAMPLE1_HPP
#define RLR_MODELS_EXAMPLE1_HPP

#include "rlr/ocp/problem.hpp"

namespace rlr::models {

/// Scalar system x+ = (a + d) x + b u with a fixed input sequence shifted by q.
///
/// The only constraint row is x_{k+1} <= 0, i.e. the next state computed from g_k; it is
/// enforced at the last step only so that the problem checks x_N <= 0.
struct Example1Model {
  double a = -0.5;
  double b = 1.0;
  Eigen::VectorXd u_fixed = (Eigen::VectorXd(5) << -1.0, 1.0, -1.0, -1.0, 1.0).finished();

  template <typename Scalar>
  VectorX<Scalar> initial_state(const VectorX<Scalar>& /*d*/) const
  {
    return VectorX<Scalar>::Constant(1, Scalar(0.0));
  }

  template <typename Scalar>
  VectorX<Scalar> dynamics(int /*k*/, const VectorX<Scalar>& x, const VectorX<Scalar>& u,
                           const VectorX<Scalar>& /*w*/, const VectorX<Scalar>& d) const
  {
    VectorX<Scalar> next(1);
    next(0) = (a + d(0)) * x(0) + b * u(0);
    return next;
  }

  template <typename Scalar>
  VectorX<Scalar> policy(int k, const Eigen::Ref<const MatrixX<Scalar>>& /*x*/,
                         const VectorX<Scalar>& q, const VectorX<Scalar>& /*r*/) const
  {
    VectorX<Scalar> u(1);
    u(0) = u_fixed(k) + q(k);
    return u;
  }

  template <typename Scalar>
  Scalar stage_cost(int k, const VectorX<Scalar>& /*x*/, const VectorX<Scalar>& u,
                    const VectorX<Scalar>& /*w*/, const VectorX<Scalar>& /*d*/) const
  {
    const Scalar shift = u(0) - u_fixed(k);
    return shift * shift;
  }

  template <typename Scalar>
  Scalar terminal_cost(const VectorX<Scalar>& /*x*/, const VectorX<Scalar>& /*w*/,
                       const VectorX<Scalar>& /*d*/) const
  {
    return Scalar(0.0);
  }

  template <typename Scalar>
  VectorX<Scalar> constraints(int k, const VectorX<Scalar>& x, const VectorX<Scalar>& u,
                              const VectorX<Scalar>& w, const VectorX<Scalar>& d) const
  {
    return dynamics<Scalar>(k, x, u, w, d);
  }
};

/// Horizon 5, d in [-0.5, 0.5], no disturbance, decision q in [-10, 10]^5 starting at zero.
ocp::ProblemDefinition example1_problem(const Example1Model& model = {});

}  // namespace rlr::models

#endif  // RLR_MODELS_EXAMPLE1_HPP
