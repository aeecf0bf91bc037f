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

#include "rlr/reduction/scenario_set.hpp"

namespace rlr::reduction {

ScenarioDistance distance(const ocp::Scenariod& a, const ocp::Scenariod& b)
{
  ScenarioDistance out;
  const Index N = a.w.rows();
  if (N > 0 && a.w.size() > 0) out.disturbance = (a.w - b.w).squaredNorm() / double(N);
  out.parameter = (a.d - b.d).squaredNorm();
  return out;
}

bool is_similar(const ocp::Scenariod& a, const ocp::Scenariod& b, double epsilon)
{
  const ScenarioDistance dist = distance(a, b);
  return dist.disturbance <= epsilon && dist.parameter <= epsilon;
}

ScenarioSet::ScenarioSet(double epsilon) : epsilon_(epsilon)
{
  if (!(epsilon > 0.0)) throw PreconditionError("scenario similarity epsilon must be positive");
}

void ScenarioSet::set_epsilon(double epsilon)
{
  if (!(epsilon > 0.0)) throw PreconditionError("scenario similarity epsilon must be positive");
  if (epsilon > epsilon_ && size() > 1) {
    throw PreconditionError("cannot enlarge epsilon of a populated scenario set");
  }
  epsilon_ = epsilon;
}

bool ScenarioSet::add(const ocp::Scenariod& candidate)
{
  if (!is_new_scenario(*this, candidate)) return false;
  scenarios_.push_back(candidate);
  return true;
}

bool is_new_scenario(const ScenarioSet& set, const ocp::Scenariod& candidate)
{
  for (const auto& stored : set) {
    if (is_similar(stored, candidate, set.epsilon())) return false;
  }
  return true;
}

ScenarioSet nominal_set(const ocp::ProblemDefinition& problem, double epsilon)
{
  ScenarioSet set(epsilon);
  set.add(problem.bounds.center());
  return set;
}

}  // namespace rlr::reduction
