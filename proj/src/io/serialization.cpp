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

#include "rlr/io/serialization.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rlr::io {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const json& j, const std::string& field, Index expected)
{
  if (!j.is_array()) throw PreconditionError(field + ": expected an array");
  if (Index(j.size()) != expected) {
    throw PreconditionError(field + ": expected length " + std::to_string(expected) + ", got " +
                            std::to_string(j.size()));
  }
  Eigen::VectorXd v(expected);
  for (Index i = 0; i < expected; ++i) {
    if (!j[std::size_t(i)].is_number()) throw PreconditionError(field + ": expected numbers");
    v(i) = j[std::size_t(i)].get<double>();
  }
  return v;
}

void check_format(const json& doc, const std::string& format)
{
  if (!doc.is_object() || doc.value("format", std::string()) != format) {
    throw PreconditionError("expected a document with \"format\": \"" + format + "\"");
  }
  if (doc.value("version", 0) != kFormatVersion) {
    throw PreconditionError(format + ": unsupported version");
  }
}

void check_problem(const json& doc, const ocp::ProblemDefinition& problem)
{
  const std::string name = doc.value("problem", std::string());
  if (!name.empty() && name != problem.name) {
    throw PreconditionError("file was written for problem '" + name + "', not '" + problem.name + "'");
  }
}

std::string number(double v)
{
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

json decision_to_json(const ocp::ProblemDefinition& problem, const ocp::DecisionVectord& decision)
{
  return {{"format", "rlr-decision"},
          {"version", kFormatVersion},
          {"problem", problem.name},
          {"q", vector_to_json(decision.q)},
          {"r", vector_to_json(decision.r)},
          {"gamma", decision.gamma}};
}

ocp::DecisionVectord decision_from_json(const json& doc, const ocp::ProblemDefinition& problem)
{
  check_format(doc, "rlr-decision");
  check_problem(doc, problem);
  ocp::DecisionVectord d;
  d.q = vector_from_json(doc.value("q", json::array()), "q", problem.dims.n_q);
  d.r = vector_from_json(doc.value("r", json::array()), "r", problem.dims.n_r);
  if (!doc.contains("gamma") || !doc["gamma"].is_number()) throw PreconditionError("gamma: expected a number");
  d.gamma = doc["gamma"].get<double>();
  return d;
}

json scenario_to_json(const ocp::Scenariod& scenario)
{
  json w = json::array();
  for (Index k = 0; k < scenario.w.rows(); ++k) w.push_back(vector_to_json(scenario.w.row(k).transpose()));
  return {{"w", w}, {"d", vector_to_json(scenario.d)}};
}

ocp::Scenariod scenario_from_json(const json& doc, const ocp::Dimensions& dims)
{
  if (!doc.is_object()) throw PreconditionError("scenario: expected an object");
  ocp::Scenariod s;
  s.d = vector_from_json(doc.value("d", json::array()), "d", dims.n_d);
  s.w.resize(dims.horizon, dims.n_w);
  const json w = doc.value("w", json::array());
  if (dims.n_w == 0 && w.empty()) {
    s.w.setZero();
    return s;
  }
  if (!w.is_array() || Index(w.size()) != dims.horizon) {
    throw PreconditionError("w: expected " + std::to_string(dims.horizon) + " rows, got " +
                            std::to_string(w.is_array() ? w.size() : 0));
  }
  for (Index k = 0; k < dims.horizon; ++k) {
    s.w.row(k) = vector_from_json(w[std::size_t(k)], "w[" + std::to_string(k) + "]", dims.n_w).transpose();
  }
  return s;
}

json scenarios_to_json(const ocp::ProblemDefinition& problem, const reduction::ScenarioSet& scenarios)
{
  json list = json::array();
  for (const auto& s : scenarios) list.push_back(scenario_to_json(s));
  return {{"format", "rlr-scenarios"},
          {"version", kFormatVersion},
          {"problem", problem.name},
          {"epsilon", scenarios.epsilon()},
          {"scenarios", list}};
}

reduction::ScenarioSet scenarios_from_json(const json& doc, const ocp::ProblemDefinition& problem)
{
  check_format(doc, "rlr-scenarios");
  check_problem(doc, problem);
  if (!doc.contains("epsilon") || !doc["epsilon"].is_number()) throw PreconditionError("epsilon: expected a number");
  reduction::ScenarioSet set(doc["epsilon"].get<double>());
  const json list = doc.value("scenarios", json::array());
  for (std::size_t i = 0; i < list.size(); ++i) {
    ocp::Scenariod s;
    try {
      s = scenario_from_json(list[i], problem.dims);
    } catch (const PreconditionError& e) {
      throw PreconditionError("scenarios[" + std::to_string(i) + "]." + e.what());
    }
    problem.check_scenario(s);
    // Stored sets were built under the same epsilon; keep every entry as written.
    if (!set.add(s)) throw PreconditionError("scenarios[" + std::to_string(i) + "] duplicates an earlier entry");
  }
  return set;
}

void write_history_csv(std::ostream& out, const std::vector<reduction::IterationRecord>& history)
{
  out << "iteration,G_max,measure,argmax,accepted,scenario_count,epsilon,gamma,lower_status,lower_max_G,"
         "gamma_decreased,upper_seconds,lower_seconds\n";
  for (const auto& r : history) {
    out << r.iteration << ',' << number(r.G_max) << ',' << number(r.measure) << ',' << r.argmax << ','
        << r.accepted << ',' << r.scenario_count << ',' << number(r.epsilon) << ',' << number(r.gamma)
        << ',' << nlp::to_string(r.lower_status) << ',' << number(r.lower_max_G) << ','
        << (r.gamma_decreased ? 1 : 0) << ',' << number(r.upper_seconds) << ','
        << number(r.lower_seconds) << '\n';
  }
}

void write_candidates_csv(std::ostream& out, const ocp::ProblemDefinition& problem,
                          const std::vector<reduction::Candidate>& candidates)
{
  out << "rank,G,measure,argmax,start,component";
  for (Index i = 0; i < problem.dims.n_d; ++i) out << ",d" << i;
  out << '\n';
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    out << i << ',' << number(c.G) << ',' << number(c.measure) << ',' << ocp::describe(problem, c.where)
        << ',' << c.start << ',' << c.component;
    for (Index j = 0; j < c.scenario.d.size(); ++j) out << ',' << number(c.scenario.d(j));
    out << '\n';
  }
}

json read_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& doc)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("error writing " + path);
}

}  // namespace rlr::io
