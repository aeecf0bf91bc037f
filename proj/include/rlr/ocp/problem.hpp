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

#ifndef RLR_OCP_PROBLEM_HPP
#define RLR_OCP_PROBLEM_HPP

#include "rlr/core.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace rlr::ocp {

struct Dimensions {
  int horizon = 0;
  int n_x = 0;
  int n_u = 0;
  int n_w = 0;
  int n_d = 0;
  int n_q = 0;
  int n_r = 0;
  int n_g = 0;

  /// Length of a scenario flattened as (w_0, ..., w_{N-1}, d).
  Index scenario_size() const { return Index(horizon) * n_w + n_d; }
  Index decision_size() const { return Index(n_q) + n_r; }
};

/// One uncertainty realisation: a disturbance trajectory (row k holds w_k) and constant parameters.
template <typename Scalar>
struct Scenario {
  MatrixX<Scalar> w;
  VectorX<Scalar> d;
};
using Scenariod = Scenario<double>;

/// Policy parameters (time-varying q, time-invariant r) and the cost epigraph bound.
template <typename Scalar>
struct DecisionVector {
  VectorX<Scalar> q;
  VectorX<Scalar> r;
  Scalar gamma{0};
};
using DecisionVectord = DecisionVector<double>;

/// State, input and constraint trajectories of one closed-loop simulation.
///
/// Row k of x holds x_k (N+1 rows), row k of u and g_values hold u_k and g_k (N rows).
/// Constraint entries that a problem declares absent are -infinity.
template <typename Scalar>
struct Rollout {
  MatrixX<Scalar> x;
  MatrixX<Scalar> u;
  MatrixX<Scalar> g_values;
  Scalar cost{0};
};
using Rolloutd = Rollout<double>;

/// Box uncertainty set. Disturbance bounds are given per step so that they may follow a schedule.
struct UncertaintyBounds {
  Eigen::MatrixXd w_lower;  // N x n_w
  Eigen::MatrixXd w_upper;
  Eigen::VectorXd d_lower;
  Eigen::VectorXd d_upper;

  /// Throws PreconditionError unless lower <= upper and all entries are finite.
  void validate() const;
  bool contains(const Scenariod& s, double tol = 0.0) const;
  Scenariod center() const;
  Scenariod clamp(const Scenariod& s) const;
  bool degenerate() const;
};

/// Bounds on the policy parameters seen by the lower-level solver.
struct DecisionBounds {
  Eigen::VectorXd q_lower, q_upper;
  Eigen::VectorXd r_lower, r_upper;
};

template <typename Scalar>
struct ProblemFunctions {
  using Vector = VectorX<Scalar>;
  using History = Eigen::Ref<const MatrixX<Scalar>>;

  std::function<Vector(const Vector& d)> initial_state;
  std::function<Vector(int k, const Vector& x, const Vector& u, const Vector& w, const Vector& d)>
      dynamics;
  /// Receives rows 0..k of the state trajectory.
  std::function<Vector(int k, const History& x, const Vector& q, const Vector& r)> policy;
  std::function<Scalar(int k, const Vector& x, const Vector& u, const Vector& w, const Vector& d)>
      stage_cost;
  /// The disturbance argument is w_{N-1}; w is only defined up to that step.
  std::function<Scalar(const Vector& x_N, const Vector& w_last, const Vector& d)> terminal_cost;
  std::function<Vector(int k, const Vector& x, const Vector& u, const Vector& w, const Vector& d)>
      constraints;

  explicit operator bool() const
  {
    return initial_state && dynamics && policy && stage_cost && terminal_cost && constraints;
  }
};

/// An uncertain optimal control problem with a parameterised feedback policy.
///
/// `functions` are mandatory. `derivative_functions` are the same maps instantiated on
/// ADScalar; when present, solvers use exact forward-mode gradients instead of finite
/// differences.
struct ProblemDefinition {
  std::string name;
  Dimensions dims;
  Eigen::VectorXd x0;
  UncertaintyBounds bounds;
  DecisionBounds decision_bounds;
  DecisionVectord initial_decision;
  std::vector<std::string> constraint_names;

  ProblemFunctions<double> functions;
  ProblemFunctions<ADScalar> derivative_functions;

  /// Optional sparsity of g: entry (k, h) is enforced iff this returns true (default: all).
  std::function<bool(int k, int h)> constraint_active;

  bool has_derivatives() const { return static_cast<bool>(derivative_functions); }
  bool is_active(int k, int h) const { return !constraint_active || constraint_active(k, h); }

  template <typename Scalar>
  const ProblemFunctions<Scalar>& functions_for() const
  {
    if constexpr (std::is_same_v<Scalar, double>) {
      return functions;
    } else {
      return derivative_functions;
    }
  }

  /// Throws PreconditionError on inconsistent dimensions or missing callables.
  void validate() const;
  void check_decision(const DecisionVectord& decision) const;
  void check_scenario(const Scenariod& scenario) const;
};

/// Binds a model object exposing scalar-templated members into both function tables.
///
/// The model must provide `initial_state`, `dynamics`, `policy`, `stage_cost`,
/// `terminal_cost` and `constraints` as member templates over the scalar type.
template <typename Scalar, typename Model>
ProblemFunctions<Scalar> bind_model(std::shared_ptr<const Model> model)
{
  using Vector = VectorX<Scalar>;
  using History = typename ProblemFunctions<Scalar>::History;
  ProblemFunctions<Scalar> f;
  f.initial_state = [model](const Vector& d) { return model->template initial_state<Scalar>(d); };
  f.dynamics = [model](int k, const Vector& x, const Vector& u, const Vector& w, const Vector& d) {
    return model->template dynamics<Scalar>(k, x, u, w, d);
  };
  f.policy = [model](int k, const History& x, const Vector& q, const Vector& r) {
    return model->template policy<Scalar>(k, x, q, r);
  };
  f.stage_cost = [model](int k, const Vector& x, const Vector& u, const Vector& w,
                         const Vector& d) { return model->template stage_cost<Scalar>(k, x, u, w, d); };
  f.terminal_cost = [model](const Vector& x, const Vector& w, const Vector& d) {
    return model->template terminal_cost<Scalar>(x, w, d);
  };
  f.constraints = [model](int k, const Vector& x, const Vector& u, const Vector& w,
                          const Vector& d) { return model->template constraints<Scalar>(k, x, u, w, d); };
  return f;
}

template <typename Model>
void attach_model(ProblemDefinition& problem, std::shared_ptr<const Model> model)
{
  problem.functions = bind_model<double>(model);
  problem.derivative_functions = bind_model<ADScalar>(model);
}

/// Scenario flattened as (w_0, ..., w_{N-1}, d).
Eigen::VectorXd flatten(const Scenariod& s);
Scenariod unflatten(const Eigen::Ref<const Eigen::VectorXd>& z, const Dimensions& dims);

Eigen::VectorXd flatten(const DecisionVectord& decision);
DecisionVectord unflatten_decision(const Eigen::Ref<const Eigen::VectorXd>& z,
                                   const Dimensions& dims, double gamma);

}  // namespace rlr::ocp

#endif  // RLR_OCP_PROBLEM_HPP
