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

#ifndef RLR_IO_SERIALIZATION_HPP
#define RLR_IO_SERIALIZATION_HPP

#include "rlr/ocp/problem.hpp"
#include "rlr/reduction/local_reduction.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace rlr::io {

/// Decision file: {"format": "rlr-decision", "version": 1, "problem", "q", "r", "gamma"}.
/// Doubles are written in shortest round-trip form, so reading returns identical bits.
nlohmann::json decision_to_json(const ocp::ProblemDefinition& problem,
                                const ocp::DecisionVectord& decision);

/// Throws PreconditionError naming expected and actual lengths on a dimension mismatch.
ocp::DecisionVectord decision_from_json(const nlohmann::json& doc,
                                        const ocp::ProblemDefinition& problem);

/// Scenario file: {"format": "rlr-scenarios", "version": 1, "problem", "epsilon",
/// "scenarios": [{"w": [[...], ...], "d": [...]}, ...]}.
nlohmann::json scenarios_to_json(const ocp::ProblemDefinition& problem,
                                 const reduction::ScenarioSet& scenarios);
reduction::ScenarioSet scenarios_from_json(const nlohmann::json& doc,
                                           const ocp::ProblemDefinition& problem);

nlohmann::json scenario_to_json(const ocp::Scenariod& scenario);
ocp::Scenariod scenario_from_json(const nlohmann::json& doc, const ocp::Dimensions& dims);

/// iteration,G_max,measure,argmax,accepted,scenario_count,epsilon,gamma,lower_status,
/// lower_max_G,gamma_decreased,upper_seconds,lower_seconds
void write_history_csv(std::ostream& out, const std::vector<reduction::IterationRecord>& history);

/// rank,G,measure,argmax,start,component,d0..d{n_d-1}
void write_candidates_csv(std::ostream& out, const ocp::ProblemDefinition& problem,
                          const std::vector<reduction::Candidate>& candidates);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& doc);

}  // namespace rlr::io

#endif  // RLR_IO_SERIALIZATION_HPP
