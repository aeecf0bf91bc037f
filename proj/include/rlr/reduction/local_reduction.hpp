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

#ifndef RLR_REDUCTION_LOCAL_REDUCTION_HPP
#define RLR_REDUCTION_LOCAL_REDUCTION_HPP

#include "rlr/nlp/nlp.hpp"
#include "rlr/ocp/rollout.hpp"
#include "rlr/reduction/scenario_set.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlr::reduction {

/// How the upper level splits the nonsmooth max in G into smooth subproblems.
enum class UpperLevelMode {
  /// One local maximisation per enforced entry g_k[h] and one for the cost term.
  per_component,
  /// One local maximisation per row h (all steps, via the largest entry at the start point)
  /// and one for the cost term.
  per_row,
};

std::string to_string(UpperLevelMode mode);
UpperLevelMode parse_upper_level_mode(const std::string& text);

struct LocalReductionConfig {
  double epsilon = 1e-3;
  double tol_G = 1e-6;
  int max_iterations = 100;
  int multistarts = 8;
  int scenarios_per_iteration = 1;
  std::uint64_t seed = 0;
  /// Worker cap for the upper level; 0 uses the hardware concurrency.
  int threads = 1;
  /// Solve the lower level on the initial set before the first worst-case search.
  bool presolve_initial_set = true;
  UpperLevelMode mode = UpperLevelMode::per_row;
  nlp::NlpOptions lower_options = default_lower_options();
  /// Tolerance on the scaled projected gradient of each upper-level subproblem.
  double upper_tolerance = 1e-8;
  int upper_max_iterations = 500;

  static nlp::NlpOptions default_lower_options();

  /// Throws PreconditionError naming the offending field.
  void validate() const;
};

/// Violation measure driving the algorithm: G with the cost residual taken relative to
/// max(1, |gamma|), so that one tolerance serves constraints and costs of any magnitude.
ocp::GEvaluation scaled_G(const ocp::Rolloutd& rollout, double gamma);

/// scaled_G of one scenario; a diverged rollout gives +infinity at the divergence step.
ocp::GEvaluation scaled_G(const ocp::ProblemDefinition& problem,
                          const ocp::DecisionVectord& decision, const ocp::Scenariod& scenario);

struct LowerLevelResult {
  ocp::DecisionVectord decision;
  nlp::Status status = nlp::Status::max_iterations;
  /// Largest scaled_G over the scenario set at the returned decision.
  double max_G = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
};

/// min gamma over (q, r, gamma) s.t. G(z(q, r, w_i, d_i), gamma) <= 0 for every stored scenario.
///
/// Trajectories are eliminated by rollout, so only the policy parameters and gamma are
/// variables. The returned gamma is the largest scenario cost at the returned (q, r).
LowerLevelResult solve_lower(const ocp::ProblemDefinition& problem, const ScenarioSet& scenarios,
                             const ocp::DecisionVectord& warm_start,
                             const LocalReductionConfig& config = {});

struct Candidate {
  ocp::Scenariod scenario;
  /// Exact G and the scaled measure used for ranking, with the entry attaining the latter.
  double G = 0.0;
  double measure = 0.0;
  ocp::GEvaluation where;
  /// Index of the start point and of the subproblem that produced the candidate.
  int start = -1;
  int component = -1;
};

class WorstCaseSearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Start points for the upper level: the box centre, then alternating random corners (no corner
/// repeats before all have been used) and uniform draws. Deterministic in (seed, stream).
std::vector<ocp::Scenariod> upper_level_starts(const ocp::UncertaintyBounds& bounds, int count,
                                               std::uint64_t seed, std::uint64_t stream);

/// Multistart local maximisation of G over the full uncertainty box.
///
/// Candidates are sorted by measure (descending); candidates within tolerance in measure that
/// are also epsilon-similar are merged. `stream` decorrelates the start points across iterations.
std::vector<Candidate> find_worst_case(const ocp::ProblemDefinition& problem,
                                       const ocp::DecisionVectord& decision,
                                       const LocalReductionConfig& config = {},
                                       std::uint64_t stream = 0);

enum class RunStatus { success, stalled, max_iterations };
std::string to_string(RunStatus status);

struct IterationRecord {
  int iteration = 0;
  /// Top candidate of the worst-case search at the decision entering this iteration.
  double G_max = 0.0;
  double measure = 0.0;
  ocp::Scenariod scenario;
  std::string argmax;
  int accepted = 0;
  std::size_t scenario_count = 0;
  double epsilon = 0.0;
  /// Decision after the lower-level re-solve (unchanged on the final, terminating record).
  double gamma = 0.0;
  nlp::Status lower_status = nlp::Status::converged;
  double lower_max_G = 0.0;
  bool gamma_decreased = false;
  double upper_seconds = 0.0;
  double lower_seconds = 0.0;
};

struct RunResult {
  RunStatus status = RunStatus::max_iterations;
  ocp::DecisionVectord decision;
  ScenarioSet scenarios;
  std::vector<IterationRecord> history;
  /// Decision after solving on the initial set only (equal to the start when not presolved).
  ocp::DecisionVectord initial_decision;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

/// Local reduction: alternate worst-case search and lower-level re-solves until no scenario
/// has scaled_G above tol_G, until no violating candidate is new (after halving epsilon
/// once), or until max_iterations.
RunResult run(const ocp::ProblemDefinition& problem, const LocalReductionConfig& config,
              const ScenarioSet& initial_set,
              const std::optional<ocp::DecisionVectord>& initial_decision = std::nullopt,
              const IterationCallback& on_iteration = {});

}  // namespace rlr::reduction

#endif  // RLR_REDUCTION_LOCAL_REDUCTION_HPP
