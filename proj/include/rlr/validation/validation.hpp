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

#ifndef RLR_VALIDATION_VALIDATION_HPP
#define RLR_VALIDATION_VALIDATION_HPP

#include "rlr/ocp/rollout.hpp"

#include <cstdint>
#include <ostream>
#include <vector>

namespace rlr::validation {

struct SampleRecord {
  std::size_t index = 0;
  /// Exact G (cost term included) and the largest constraint entry alone.
  double G = 0.0;
  double constraint_violation = 0.0;
  ocp::GEvaluation where;
  bool diverged = false;
};

struct ValidationReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  /// Largest constraint entry over all samples and steps (+inf if any rollout diverged).
  double max_violation = 0.0;
  /// Largest G, cost term included.
  double max_G = 0.0;
  /// Fraction of samples with G > 0.
  double violation_rate = 0.0;
  /// Fraction of samples with some constraint entry > 0.
  double constraint_violation_rate = 0.0;
  std::size_t diverged = 0;
  /// Per step: largest enforced constraint entry over samples (-inf where nothing is enforced).
  Eigen::VectorXd envelope;
  std::size_t worst_index = 0;
  ocp::Scenariod worst_scenario;
  std::vector<SampleRecord> records;
};

/// Sample `index` of the uniform stream `seed`; independent of how many samples are drawn.
ocp::Scenariod sample_scenario(const ocp::UncertaintyBounds& bounds, std::uint64_t seed,
                               std::uint64_t index);

/// Monte Carlo check of a fixed decision against i.i.d. uniform scenarios.
///
/// Samples are evaluated on up to `threads` workers; the reduction runs in index order, so
/// the report does not depend on the worker count.
ValidationReport validate(const ocp::ProblemDefinition& problem,
                          const ocp::DecisionVectord& decision, std::size_t n_samples,
                          std::uint64_t seed, int threads = 1);

/// Summary lines prefixed by '#', then one row per sample:
/// index,G,constraint_violation,component,step,row.
void write_csv(std::ostream& out, const ocp::ProblemDefinition& problem,
               const ValidationReport& report);

/// Long-format trajectories (sample,k,x0..,u0..) for the given sample indices.
void write_trajectories_csv(std::ostream& out, const ocp::ProblemDefinition& problem,
                            const ocp::DecisionVectord& decision, const ValidationReport& report,
                            const std::vector<std::size_t>& indices);

}  // namespace rlr::validation

#endif  // RLR_VALIDATION_VALIDATION_HPP
