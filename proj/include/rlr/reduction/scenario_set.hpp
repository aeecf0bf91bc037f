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

#ifndef RLR_REDUCTION_SCENARIO_SET_HPP
#define RLR_REDUCTION_SCENARIO_SET_HPP

#include "rlr/ocp/problem.hpp"

#include <vector>

namespace rlr::reduction {

/// Squared distances used by the similarity test: (1/N)||w_a - w_b||^2 and ||d_a - d_b||^2.
struct ScenarioDistance {
  double disturbance = 0.0;
  double parameter = 0.0;
};

ScenarioDistance distance(const ocp::Scenariod& a, const ocp::Scenariod& b);

/// Two scenarios are similar when both squared distances are at most epsilon.
bool is_similar(const ocp::Scenariod& a, const ocp::Scenariod& b, double epsilon);

/// Ordered collection of pairwise dissimilar scenarios.
class ScenarioSet {
 public:
  explicit ScenarioSet(double epsilon = 1e-3);

  double epsilon() const { return epsilon_; }
  /// Shrinking epsilon keeps the invariant; growing it is rejected.
  void set_epsilon(double epsilon);

  std::size_t size() const { return scenarios_.size(); }
  bool empty() const { return scenarios_.empty(); }
  const ocp::Scenariod& operator[](std::size_t i) const { return scenarios_[i]; }
  const std::vector<ocp::Scenariod>& scenarios() const { return scenarios_; }
  auto begin() const { return scenarios_.begin(); }
  auto end() const { return scenarios_.end(); }

  /// Appends the candidate if it is new; returns whether it was added.
  bool add(const ocp::Scenariod& candidate);

 private:
  double epsilon_;
  std::vector<ocp::Scenariod> scenarios_;
};

/// True iff the candidate is dissimilar to every stored scenario.
bool is_new_scenario(const ScenarioSet& set, const ocp::Scenariod& candidate);

/// Single scenario at the centre of the uncertainty box.
ScenarioSet nominal_set(const ocp::ProblemDefinition& problem, double epsilon);

}  // namespace rlr::reduction

#endif  // RLR_REDUCTION_SCENARIO_SET_HPP
