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

#include "unit/constants_audit.hpp"

#include "rlr/io/config.hpp"
#include "rlr/io/presets.hpp"
#include "rlr/io/serialization.hpp"
#include "rlr/models/building.hpp"
#include "rlr/models/compressor.hpp"

#include <json.hpp>

#include <sstream>

namespace rlr::test {

namespace {

using nlohmann::json;

class Audit {
 public:
  void same(const std::string& what, double actual, double expected)
  {
    if (actual != expected) {
      std::ostringstream os;
      os.precision(17);
      os << what << ": have " << actual << ", table says " << expected;
      mismatches.push_back(os.str());
    }
  }

  template <typename Derived>
  void same(const std::string& what, const Eigen::DenseBase<Derived>& actual, const json& expected)
  {
    if (actual.rows() > 1 && actual.cols() > 1) {
      for (Index i = 0; i < actual.rows(); ++i) {
        for (Index j = 0; j < actual.cols(); ++j) {
          same(what + "(" + std::to_string(i) + "," + std::to_string(j) + ")", actual(i, j),
               expected.at(std::size_t(i)).at(std::size_t(j)).get<double>());
        }
      }
      return;
    }
    if (Index(expected.size()) != actual.size()) {
      mismatches.push_back(what + ": length differs");
      return;
    }
    for (Index i = 0; i < actual.size(); ++i) {
      same(what + "(" + std::to_string(i) + ")", actual(i), expected.at(std::size_t(i)).get<double>());
    }
  }

  void same_json(const std::string& what, const json& actual, const json& expected)
  {
    if (actual.is_array() && expected.is_array() && actual.size() == expected.size()) {
      for (std::size_t i = 0; i < actual.size(); ++i) {
        same_json(what + "[" + std::to_string(i) + "]", actual[i], expected[i]);
      }
    } else if (actual.is_number() && expected.is_number()) {
      same(what, actual.get<double>(), expected.get<double>());
    } else {
      mismatches.push_back(what + ": shape differs");
    }
  }

  std::vector<std::string> mismatches;
};

void audit_building(Audit& a, const models::BuildingParameters& p, const json& t,
                    const std::string& tag)
{
  a.same(tag + " A", p.A, t["A"]);
  a.same(tag + " B", p.B, t["B"]);
  a.same(tag + " W", p.W, t["W"]);
  a.same(tag + " x0", p.x0, t["x0"]);
  a.same(tag + " multiplier spread low", 1.0 - p.multiplier_spread, t["multiplier_box"][0].get<double>());
  a.same(tag + " multiplier spread high", 1.0 + p.multiplier_spread, t["multiplier_box"][1].get<double>());
  a.same(tag + " initial offset", p.initial_offset, t["initial_offset_box"][1].get<double>());
  a.same(tag + " t_min day", p.t_min_day, t["comfort"]["t_min_day"].get<double>());
  a.same(tag + " t_min night", p.t_min_night, t["comfort"]["t_min_night"].get<double>());
  a.same(tag + " t_max", p.t_max, t["comfort"]["t_max"].get<double>());
  a.same(tag + " day start", p.day_start_hour, t["day_start_hour"].get<double>());
  a.same(tag + " day length", p.day_hours, t["day_hours"].get<double>());
  a.same(tag + " horizon", p.horizon, t["horizon"].get<double>());
  a.same(tag + " horizon hours", p.horizon_hours, t["horizon_hours"].get<double>());
  a.same(tag + " input lower", p.input_lower, t["input_limits"][0].get<double>());
  a.same(tag + " input upper", p.input_upper, t["input_limits"][1].get<double>());
  const json& box = t["disturbance_box"];
  a.same(tag + " day w lower", p.w_day_lower, box["day_lower"]);
  a.same(tag + " day w upper", p.w_day_upper, box["day_upper"]);
  a.same(tag + " night w lower", p.w_night_lower, box["night_lower"]);
  a.same(tag + " night w upper", p.w_night_upper, box["night_upper"]);
}

void audit_building_problem(Audit& a, const ocp::ProblemDefinition& problem,
                            const models::BuildingParameters& p, const json& t,
                            const std::string& tag)
{
  const double lo = t["multiplier_box"][0].get<double>(), hi = t["multiplier_box"][1].get<double>();
  for (int i = 0; i < 12; ++i) {
    a.same(tag + " d_lower(" + std::to_string(i) + ")", problem.bounds.d_lower(i), lo);
    a.same(tag + " d_upper(" + std::to_string(i) + ")", problem.bounds.d_upper(i), hi);
  }
  for (int i = 12; i < 14; ++i) {
    a.same(tag + " d_lower(" + std::to_string(i) + ")", problem.bounds.d_lower(i),
           t["initial_offset_box"][0].get<double>());
    a.same(tag + " d_upper(" + std::to_string(i) + ")", problem.bounds.d_upper(i),
           t["initial_offset_box"][1].get<double>());
  }
  const json& box = t["disturbance_box"];
  for (int k = 0; k < problem.dims.horizon; ++k) {
    const bool day = models::building_daytime(p, k);
    const std::string key = day ? "day" : "night";
    a.same(tag + " w_lower row " + std::to_string(k), problem.bounds.w_lower.row(k), box[key + "_lower"]);
    a.same(tag + " w_upper row " + std::to_string(k), problem.bounds.w_upper.row(k), box[key + "_upper"]);
  }
}

void audit_compressor(Audit& a, const models::CompressorParameters& p, const json& t,
                      const std::string& tag)
{
  a.same(tag + " alpha", p.alpha, t["alpha"]);
  a.same(tag + " m min", p.mass_flow_min, t["mass_flow_box"][0].get<double>());
  a.same(tag + " m max", p.mass_flow_max, t["mass_flow_box"][1].get<double>());
  a.same(tag + " omega min", p.speed_min, t["speed_box"][0].get<double>());
  a.same(tag + " omega max", p.speed_max, t["speed_box"][1].get<double>());
  a.same(tag + " target", p.mass_flow_target, t["mass_flow_target"].get<double>());
  a.same(tag + " weight recycle", p.weight_recycle, t["weights"]["recycle"].get<double>());
  a.same(tag + " weight speed", p.weight_speed, t["weights"]["speed"].get<double>());
  a.same(tag + " weight tracking", p.weight_tracking, t["weights"]["tracking"].get<double>());
  a.same(tag + " final time", p.final_time, t["final_time"].get<double>());
  a.same(tag + " step", p.step, t["step"].get<double>());
  a.same(tag + " torque lower", p.torque_lower, t["torque_limits"][0].get<double>());
  a.same(tag + " torque upper", p.torque_upper, t["torque_limits"][1].get<double>());
  a.same(tag + " recycle lower", p.recycle_lower, t["recycle_limits"][0].get<double>());
  a.same(tag + " recycle upper", p.recycle_upper, t["recycle_limits"][1].get<double>());
  a.same(tag + " valve spread", p.valve_spread, t["valve_spread"].get<double>());
  a.same(tag + " map spread", p.map_spread, t["map_spread"].get<double>());
}

void audit_compressor_problem(Audit& a, const ocp::ProblemDefinition& problem,
                              const models::CompressorParameters& p, const std::string& tag)
{
  for (int i = 0; i < 9; ++i) {
    const double spread = i < 3 ? p.valve_spread : p.map_spread;
    a.same(tag + " d_lower(" + std::to_string(i) + ")", problem.bounds.d_lower(i), 1.0 - spread);
    a.same(tag + " d_upper(" + std::to_string(i) + ")", problem.bounds.d_upper(i), 1.0 + spread);
  }
}

}  // namespace

std::vector<std::string> audit_constants(const std::string& path)
{
  const json table = io::read_json_file(path);
  const json& tb = table.at("building");
  const json& tc = table.at("compressor");
  Audit a;

  const auto building = models::building_parameters(models::Scale::paper);
  audit_building(a, building, tb, "building");
  a.same("building printed beta", models::building_printed_beta(), tb["saturation_beta"]);
  audit_building_problem(a, models::building_problem(building), building, tb, "building problem");

  const auto compressor = models::compressor_parameters(models::Scale::paper);
  audit_compressor(a, compressor, tc, "compressor");
  a.same("compressor printed torque beta", models::compressor_printed_torque_beta(), tc["torque_beta"]);
  a.same("compressor printed recycle beta", models::compressor_printed_recycle_beta(),
         tc["recycle_beta"]);
  audit_compressor_problem(a, models::compressor_problem(compressor), compressor, "compressor problem");

  // The paper-scale presets go through the configuration parser.
  const auto building_preset = io::preset_config("building_paper");
  const auto building_problem = io::build_problem(building_preset);
  audit_building_problem(a, building_problem, building, tb, "building preset");
  const auto compressor_preset = io::preset_config("compressor_paper");
  audit_compressor_problem(a, io::build_problem(compressor_preset), compressor, "compressor preset");
  // Constants written into the preset files themselves.
  const json& bp = building_preset.parameters;
  for (const char* key : {"A", "B", "W", "x0"}) a.same_json(std::string("building preset ") + key, bp.at(key), tb.at(key));
  a.same_json("compressor preset alpha", compressor_preset.parameters.at("alpha"), tc.at("alpha"));
  return a.mismatches;
}

}  // namespace rlr::test
