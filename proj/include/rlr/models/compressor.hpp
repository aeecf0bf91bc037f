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

#ifndef RLR_MODELS_COMPRESSOR_HPP
#define RLR_MODELS_COMPRESSOR_HPP

#include "rlr/models/saturation.hpp"
#include "rlr/models/scale.hpp"
#include "rlr/ocp/problem.hpp"

namespace rlr::models {

/// Centrifugal compressor with a recycle loop, driven by a PI torque controller.
///
/// State x = (p_s, p_d, m, omega, m_r, I, I_rec): suction and discharge pressure [bar],
/// compressor mass flow [kg/s], shaft speed [rad/s], recycle flow [kg/s], integral of the
/// mass-flow error and integral of the recycle controller error.
///
/// Uncertain parameter layout (n_d = 9): multipliers on (k_in, k_out, k_rec) followed by
/// multipliers on the six pressure-ratio map coefficients. There is no disturbance (n_w = 0).
///
/// Physical constants below marked "assumed default" have no reference value;
/// they were chosen so that the nominal closed loop is stable and the bounds on m and omega
/// can become active under uncertainty.
struct CompressorParameters {
  Eigen::Matrix<double, 6, 1> alpha =
      (Eigen::Matrix<double, 6, 1>() << 2.691, -0.014, -0.041, 0.0009, 0.0002, 0.00002).finished();

  double mass_flow_target = 100.0;
  double weight_recycle = 100.0;
  double weight_speed = 0.1;
  double weight_tracking = 1000.0;
  double final_time = 100.0;
  double step = 0.5;

  double mass_flow_min = 65.0;
  double mass_flow_max = 105.0;
  double speed_min = 550.0;
  double speed_max = 876.0;

  double torque_lower = 0.0;
  double torque_upper = 1000.0;
  Eigen::Vector4d torque_beta;
  double recycle_lower = 0.0;
  double recycle_upper = 1.0;
  Eigen::Vector4d recycle_beta;
  SaturationForm saturation_form = SaturationForm::offset;

  double valve_spread = 0.05;
  double map_spread = 0.02;

  // assumed defaults
  double sound_speed = 340.0;             // a_01 [m/s]
  double suction_volume = 578.0;          // V_s [m^3]
  double discharge_volume = 1.156;        // V_d [m^3]
  double duct_area = 0.01;                // A_1 [m^2]
  double duct_length = 2000.0;            // L_c [m]
  double pascal_per_bar = 1e5;
  double inertia = 2.0;                   // J
  double recycle_time_constant = 2.0;     // tau_r [s]
  double reaction_torque_coefficient = 500.0 / 70000.0;  // tau_c = k m omega
  double inlet_pressure = 1.1;            // p_in [bar]
  double outlet_pressure = 11.84775;      // p_out [bar]
  double inlet_valve = 790.569415042095;  // k_in A_in
  double outlet_valve = 20.966765836348923;  // k_out A_out
  double recycle_valve = 10.0;            // k_rec A_rec
  double recycle_setpoint = 70.0;         // surge-margin mass flow for the recycle PI
  double recycle_kp = 0.1;
  double recycle_ki = 0.01;
  double sqrt_smoothing = 1e-6;           // eps_p
  double initial_mass_flow = 90.0;
  double initial_integral = -100.0;

  Eigen::Vector2d gain_lower{-100.0, -10.0};
  Eigen::Vector2d gain_upper{0.0, 0.0};
  Eigen::Vector2d initial_gains{-10.0, -2.0};

  int horizon() const;
  double suction_gain() const;    // a_01^2 / V_s in bar per kg
  double discharge_gain() const;  // a_01^2 / V_d in bar per kg
  double duct_gain() const;       // A_1 / L_c in kg/s^2 per bar
};

CompressorParameters compressor_parameters(Scale scale);

Eigen::Vector4d compressor_printed_torque_beta();
Eigen::Vector4d compressor_printed_recycle_beta();
Eigen::Vector4d compressor_fitted_torque_beta();
Eigen::Vector4d compressor_fitted_recycle_beta();

template <typename Scalar>
Scalar pressure_ratio(const Scalar& m, const Scalar& omega,
                      const Eigen::Ref<const VectorX<Scalar>>& alpha)
{
  return alpha(0) + alpha(1) * m + alpha(2) * omega + alpha(3) * m * omega + alpha(4) * m * m +
         alpha(5) * omega * omega;
}

/// Nominal equilibrium at the initial mass flow with zero recycle flow, preloaded integrator.
Eigen::VectorXd compressor_initial_state(const CompressorParameters& params);

struct CompressorModel {
  CompressorParameters params;
  Eigen::VectorXd x0;

  explicit CompressorModel(const CompressorParameters& p);

  /// Smooth approximation of max(x, 0).
  template <typename Scalar>
  Scalar positive_part(const Scalar& x) const
  {
    using std::sqrt;
    const double e = params.sqrt_smoothing;
    return 0.5 * (x + sqrt(x * x + e * e));
  }

  template <typename Scalar>
  VectorX<Scalar> rhs(const VectorX<Scalar>& x, const Scalar& torque, const VectorX<Scalar>& d) const
  {
    using std::sqrt;
    const Scalar& ps = x(0);
    const Scalar& pd = x(1);
    const Scalar& m = x(2);
    const Scalar& omega = x(3);
    const Scalar& mr = x(4);
    const Scalar& integral_rec = x(6);

    VectorX<Scalar> alpha(6);
    for (int i = 0; i < 6; ++i) alpha(i) = params.alpha(i) * d(3 + i);

    const Scalar m_in =
        0.4 * params.inlet_valve * d(0) * sqrt(positive_part<Scalar>(params.inlet_pressure - ps));
    const Scalar m_out =
        0.8 * params.outlet_valve * d(1) * sqrt(positive_part<Scalar>(pd - params.outlet_pressure));
    const Scalar e_rec = params.recycle_setpoint - m;
    const Scalar u_rec = smooth_saturation<Scalar>(
        params.recycle_kp * e_rec + params.recycle_ki * integral_rec, params.recycle_beta,
        params.saturation_form);
    const Scalar m_sp = params.recycle_valve * d(2) * u_rec * sqrt(positive_part<Scalar>(pd - ps));

    VectorX<Scalar> dx(7);
    dx(0) = params.suction_gain() * (m_in - m + mr);
    dx(1) = params.discharge_gain() * (m - m_out - mr);
    dx(2) = params.duct_gain() * (pressure_ratio<Scalar>(m, omega, alpha) * ps - pd);
    dx(3) = (torque - params.reaction_torque_coefficient * m * omega) / params.inertia;
    dx(4) = (m_sp - mr) / params.recycle_time_constant;
    dx(5) = m - params.mass_flow_target;
    dx(6) = e_rec;
    return dx;
  }

  template <typename Scalar>
  VectorX<Scalar> initial_state(const VectorX<Scalar>& /*d*/) const
  {
    return x0.cast<Scalar>();
  }

  /// Heun step with the torque held over the step.
  template <typename Scalar>
  VectorX<Scalar> dynamics(int /*k*/, const VectorX<Scalar>& x, const VectorX<Scalar>& u,
                           const VectorX<Scalar>& /*w*/, const VectorX<Scalar>& d) const
  {
    const Scalar torque = smooth_saturation<Scalar>(u(0), params.torque_beta, params.saturation_form);
    const double h = params.step;
    const VectorX<Scalar> k1 = rhs<Scalar>(x, torque, d);
    const VectorX<Scalar> predictor = x + h * k1;
    const VectorX<Scalar> k2 = rhs<Scalar>(predictor, torque, d);
    return x + (0.5 * h) * (k1 + k2);
  }

  /// Unsaturated torque request u = K_p (m - m_d) + K_i I, with r = (K_p, K_i).
  template <typename Scalar>
  VectorX<Scalar> policy(int k, const Eigen::Ref<const MatrixX<Scalar>>& x,
                         const VectorX<Scalar>& /*q*/, const VectorX<Scalar>& r) const
  {
    VectorX<Scalar> u(1);
    u(0) = r(0) * (x(k, 2) - params.mass_flow_target) + r(1) * x(k, 5);
    return u;
  }

  template <typename Scalar>
  Scalar stage_cost(int /*k*/, const VectorX<Scalar>& x, const VectorX<Scalar>& /*u*/,
                    const VectorX<Scalar>& /*w*/, const VectorX<Scalar>& /*d*/) const
  {
    const Scalar tracking = x(2) - params.mass_flow_target;
    return params.step * (params.weight_recycle * x(4) * x(4) + params.weight_speed * x(3) * x(3) +
                          params.weight_tracking * tracking * tracking);
  }

  template <typename Scalar>
  Scalar terminal_cost(const VectorX<Scalar>& /*x*/, const VectorX<Scalar>& /*w*/,
                       const VectorX<Scalar>& /*d*/) const
  {
    return Scalar(0.0);
  }

  template <typename Scalar>
  VectorX<Scalar> constraints(int /*k*/, const VectorX<Scalar>& x, const VectorX<Scalar>& /*u*/,
                              const VectorX<Scalar>& /*w*/, const VectorX<Scalar>& /*d*/) const
  {
    VectorX<Scalar> g(4);
    g(0) = x(2) - params.mass_flow_max;
    g(1) = params.mass_flow_min - x(2);
    g(2) = x(3) - params.speed_max;
    g(3) = params.speed_min - x(3);
    return g;
  }
};

ocp::ProblemDefinition compressor_problem(Scale scale);
ocp::ProblemDefinition compressor_problem(const CompressorParameters& params);

}  // namespace rlr::models

#endif  // RLR_MODELS_COMPRESSOR_HPP
