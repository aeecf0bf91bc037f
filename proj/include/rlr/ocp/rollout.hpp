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

#ifndef RLR_OCP_ROLLOUT_HPP
#define RLR_OCP_ROLLOUT_HPP

#include "rlr/ocp/problem.hpp"

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace rlr::ocp {

/// A state became non-finite while propagating the dynamics.
class DivergedRollout : public std::runtime_error {
 public:
  explicit DivergedRollout(int step)
      : std::runtime_error("rollout diverged at step " + std::to_string(step)), step_(step)
  {
  }
  int step() const { return step_; }

 private:
  int step_;
};

/// Closed-loop simulation z(q, r, w, d) on an arbitrary scalar type.
///
/// Costs and constraints are accumulated in the same pass. Throws DivergedRollout when a
/// state (or the cost) is non-finite; the step reported is the index of the offending state.
template <typename Scalar>
Rollout<Scalar> simulate(const ProblemDefinition& problem, const DecisionVector<Scalar>& decision,
                         const Scenario<Scalar>& scenario)
{
  using Vector = VectorX<Scalar>;
  const auto& f = problem.functions_for<Scalar>();
  const auto& dims = problem.dims;
  const int N = dims.horizon;

  Rollout<Scalar> out;
  out.x.resize(N + 1, dims.n_x);
  out.u.resize(N, dims.n_u);
  out.g_values.resize(N, dims.n_g);

  Index width = 0;
  if constexpr (!std::is_same_v<Scalar, double>) {
    auto widest = [&width](const auto& m) {
      for (Index i = 0; i < m.size(); ++i) width = std::max(width, m(i).derivatives().size());
    };
    widest(decision.q);
    widest(decision.r);
    widest(scenario.d);
    widest(scenario.w.reshaped());
  }

  const Vector& d = scenario.d;
  Vector x = f.initial_state(d);
  widen_derivatives(x, width);
  out.x.row(0) = x.transpose();
  Scalar cost(0.0);
  Vector w(dims.n_w);

  for (int k = 0; k < N; ++k) {
    w = scenario.w.row(k).transpose();
    Vector u = f.policy(k, out.x.topRows(k + 1), decision.q, decision.r);
    widen_derivatives(u, width);
    out.u.row(k) = u.transpose();

    Vector g = f.constraints(k, x, u, w, d);
    for (int h = 0; h < dims.n_g; ++h) {
      if (problem.is_active(k, h)) {
        out.g_values(k, h) = g(h);
      } else {
        out.g_values(k, h) = Scalar(-std::numeric_limits<double>::infinity());
      }
    }
    cost += f.stage_cost(k, x, u, w, d);

    x = f.dynamics(k, x, u, w, d);
    widen_derivatives(x, width);
    for (Index i = 0; i < x.size(); ++i) {
      if (!is_finite(x(i))) throw DivergedRollout(k + 1);
    }
    out.x.row(k + 1) = x.transpose();
  }
  if (N > 0) w = scenario.w.row(N - 1).transpose();
  cost += f.terminal_cost(x, w, d);
  if (!is_finite(cost)) throw DivergedRollout(N);
  out.cost = cost;
  return out;
}

Rolloutd rollout(const ProblemDefinition& problem, const DecisionVectord& decision,
                 const Scenariod& scenario);

/// Rollout whose entries carry derivatives with respect to the flattened (q, r).
Rollout<ADScalar> rollout_decision_derivatives(const ProblemDefinition& problem,
                                               const DecisionVectord& decision,
                                               const Scenariod& scenario);

/// Rollout whose entries carry derivatives with respect to the flattened scenario (w, d).
Rollout<ADScalar> rollout_scenario_derivatives(const ProblemDefinition& problem,
                                               const DecisionVectord& decision,
                                               const Scenariod& scenario);

enum class GComponent { constraint, cost };

/// Value of the aggregated constraint functional and the entry that attains it.
struct GEvaluation {
  double value = -std::numeric_limits<double>::infinity();
  GComponent component = GComponent::cost;
  int step = -1;  // -1 for the cost component
  int row = -1;
};

/// G = max{ max_{h,k} g_k[h], J_N - gamma }.
GEvaluation evaluate_G(const ProblemDefinition& problem, const Rolloutd& rollout, double gamma);

/// Largest constraint entry only (the cost epigraph term excluded).
GEvaluation max_constraint(const Rolloutd& rollout);

/// Rollout + evaluate_G. A diverged rollout evaluates to +infinity at the divergence step.
GEvaluation evaluate_scenario(const ProblemDefinition& problem, const DecisionVectord& decision,
                              const Scenariod& scenario);

struct GMaxResult {
  double value;
  std::size_t index;
  Scenariod scenario;
  GEvaluation where;
};

/// Exact maximum of G over a finite scenario collection (enumeration).
GMaxResult evaluate_G_max(const ProblemDefinition& problem, const DecisionVectord& decision,
                          std::span<const Scenariod> scenarios);

std::string describe(const ProblemDefinition& problem, const GEvaluation& where);

}  // namespace rlr::ocp

#endif  // RLR_OCP_ROLLOUT_HPP
