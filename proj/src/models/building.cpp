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

#include "rlr/models/building.hpp"

#include <cmath>
#include <memory>

namespace rlr::models {

std::string to_string(Scale scale) { return scale == Scale::paper ? "paper" : "desk"; }

Scale parse_scale(const std::string& text)
{
  if (text == "paper") return Scale::paper;
  if (text == "desk") return Scale::desk;
  throw PreconditionError("unknown scale '" + text + "' (expected paper or desk)");
}

Eigen::Vector4d building_printed_beta() { return {-5030.0, 2.937, 0.003, 1207.0}; }

Eigen::Vector4d building_fitted_beta()
{
  return {571.1101525414743, 0.3359471485538084, 0.003116575515560208, -500.0};
}

BuildingParameters building_parameters(Scale scale)
{
  BuildingParameters p;
  p.horizon = scale == Scale::paper ? 192 : 24;
  p.A << 0.8511, 0.0541, 0.0707,
         0.1293, 0.8635, 0.0055,
         0.0989, 0.0032, 0.7541;
  p.B << 0.0035, 0.0003, 0.0002;
  p.W << 0.022217, 0.0017912, 0.0422123,
         0.0015376, 0.0006944, 0.00229214,
         0.1031813, 0.0001032, 0.1960444;
  p.saturation_beta = building_fitted_beta();
  return p;
}

bool building_daytime(const BuildingParameters& params, int k)
{
  const double hour = params.start_hour + k * params.horizon_hours / params.horizon;
  double since_dawn = std::fmod(hour - params.day_start_hour, 24.0);
  if (since_dawn < 0.0) since_dawn += 24.0;
  return since_dawn < params.day_hours;
}

BuildingModel::BuildingModel(const BuildingParameters& p) : params(p)
{
  t_min.resize(p.horizon);
  for (int k = 0; k < p.horizon; ++k) {
    t_min[k] = building_daytime(p, k) ? p.t_min_day : p.t_min_night;
  }
}

ocp::ProblemDefinition building_problem(Scale scale)
{
  return building_problem(building_parameters(scale));
}

ocp::ProblemDefinition building_problem(const BuildingParameters& params)
{
  if (params.horizon <= 0) throw PreconditionError("building horizon must be positive");
  const int N = params.horizon;
  ocp::ProblemDefinition p;
  p.name = "building";
  p.dims = {N, 3, 1, 3, 14, N, 1, 2};
  p.x0 = params.x0;

  p.bounds.w_lower.resize(N, 3);
  p.bounds.w_upper.resize(N, 3);
  for (int k = 0; k < N; ++k) {
    const bool day = building_daytime(params, k);
    p.bounds.w_lower.row(k) = (day ? params.w_day_lower : params.w_night_lower).transpose();
    p.bounds.w_upper.row(k) = (day ? params.w_day_upper : params.w_night_upper).transpose();
  }
  p.bounds.d_lower.resize(14);
  p.bounds.d_upper.resize(14);
  p.bounds.d_lower.head(12).setConstant(1.0 - params.multiplier_spread);
  p.bounds.d_upper.head(12).setConstant(1.0 + params.multiplier_spread);
  p.bounds.d_lower.tail(2).setConstant(-params.initial_offset);
  p.bounds.d_upper.tail(2).setConstant(params.initial_offset);

  p.decision_bounds.q_lower = Eigen::VectorXd::Constant(N, -params.offset_bound);
  p.decision_bounds.q_upper = Eigen::VectorXd::Constant(N, params.offset_bound);
  p.decision_bounds.r_lower = Eigen::VectorXd::Constant(1, params.gain_lower);
  p.decision_bounds.r_upper = Eigen::VectorXd::Constant(1, params.gain_upper);
  p.initial_decision.q = Eigen::VectorXd::Zero(N);
  p.initial_decision.r = Eigen::VectorXd::Zero(1);
  p.initial_decision.gamma = 0.0;
  p.constraint_names = {"temp_min", "temp_max"};

  ocp::attach_model(p, std::make_shared<const BuildingModel>(params));
  p.validate();
  return p;
}

}  // namespace rlr::models
