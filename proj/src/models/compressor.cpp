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

#include "rlr/models/compressor.hpp"

#include <cmath>
#include <memory>

namespace rlr::models {

int CompressorParameters::horizon() const
{
  return static_cast<int>(std::lround(final_time / step));
}

double CompressorParameters::suction_gain() const
{
  return sound_speed * sound_speed / suction_volume / pascal_per_bar;
}

double CompressorParameters::discharge_gain() const
{
  return sound_speed * sound_speed / discharge_volume / pascal_per_bar;
}

double CompressorParameters::duct_gain() const { return duct_area / duct_length * pascal_per_bar; }

Eigen::Vector4d compressor_printed_torque_beta() { return {73.324, 0.072, 0.005, 0.0}; }
Eigen::Vector4d compressor_printed_recycle_beta() { return {0.072, 0.071, 5.279, -0.001}; }

Eigen::Vector4d compressor_fitted_torque_beta()
{
  return {70.71559235091806, 0.07071559235091805, 0.0052981783775371645, 0.0};
}

Eigen::Vector4d compressor_fitted_recycle_beta()
{
  return {0.07071559259320728, 0.07071559259320728, 5.298178368367169, 0.0};
}

CompressorParameters compressor_parameters(Scale scale)
{
  CompressorParameters p;
  p.final_time = scale == Scale::paper ? 100.0 : 20.0;
  p.torque_beta = compressor_fitted_torque_beta();
  p.recycle_beta = compressor_fitted_recycle_beta();
  return p;
}

Eigen::VectorXd compressor_initial_state(const CompressorParameters& p)
{
  const double m0 = p.initial_mass_flow;
  const double ps = p.inlet_pressure - std::pow(m0 / (0.4 * p.inlet_valve), 2);
  const double pd = p.outlet_pressure + std::pow(m0 / (0.8 * p.outlet_valve), 2);
  if (!(ps > 0.0)) throw PreconditionError("compressor initial mass flow exceeds inlet valve capacity");

  // Speed solving pressure_ratio(m0, omega) = pd / ps; take the larger root.
  const auto& a = p.alpha;
  const double qa = a(5);
  const double qb = a(2) + a(3) * m0;
  const double qc = a(0) + a(1) * m0 + a(4) * m0 * m0 - pd / ps;
  double omega = 0.0;
  if (qa != 0.0) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) throw PreconditionError("compressor map has no equilibrium speed");
    omega = (-qb + std::sqrt(disc)) / (2.0 * qa);
  } else {
    omega = -qc / qb;
  }

  Eigen::VectorXd x(7);
  x << ps, pd, m0, omega, 0.0, p.initial_integral, 0.0;
  return x;
}

CompressorModel::CompressorModel(const CompressorParameters& p)
    : params(p), x0(compressor_initial_state(p))
{
}

ocp::ProblemDefinition compressor_problem(Scale scale)
{
  return compressor_problem(compressor_parameters(scale));
}

ocp::ProblemDefinition compressor_problem(const CompressorParameters& params)
{
  const int N = params.horizon();
  if (N <= 0) throw PreconditionError("compressor horizon must be positive");
  auto model = std::make_shared<const CompressorModel>(params);

  ocp::ProblemDefinition p;
  p.name = "compressor";
  p.dims = {N, 7, 1, 0, 9, 0, 2, 4};
  p.x0 = model->x0;
  p.bounds.w_lower = Eigen::MatrixXd::Zero(N, 0);
  p.bounds.w_upper = Eigen::MatrixXd::Zero(N, 0);
  p.bounds.d_lower.resize(9);
  p.bounds.d_upper.resize(9);
  p.bounds.d_lower.head(3).setConstant(1.0 - params.valve_spread);
  p.bounds.d_upper.head(3).setConstant(1.0 + params.valve_spread);
  p.bounds.d_lower.tail(6).setConstant(1.0 - params.map_spread);
  p.bounds.d_upper.tail(6).setConstant(1.0 + params.map_spread);

  p.decision_bounds.q_lower = Eigen::VectorXd(0);
  p.decision_bounds.q_upper = Eigen::VectorXd(0);
  p.decision_bounds.r_lower = params.gain_lower;
  p.decision_bounds.r_upper = params.gain_upper;
  p.initial_decision.q = Eigen::VectorXd(0);
  p.initial_decision.r = params.initial_gains;
  p.initial_decision.gamma = 0.0;
  p.constraint_names = {"mass_flow_max", "mass_flow_min", "speed_max", "speed_min"};

  ocp::attach_model(p, model);
  p.validate();
  return p;
}

}  // namespace rlr::models
