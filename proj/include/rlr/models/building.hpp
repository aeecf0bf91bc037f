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

#ifndef RLR_MODELS_BUILDING_HPP
#define RLR_MODELS_BUILDING_HPP

#include "rlr/models/saturation.hpp"
#include "rlr/models/scale.hpp"
#include "rlr/ocp/problem.hpp"

#include <vector>

namespace rlr::models {

/// Three-state thermal model of an office: room air, walls and corridor.
///
/// Uncertain parameter layout (n_d = 14):
///   d(0..8)   multipliers on A, row-major
///   d(9..11)  multipliers on B
///   d(12)     wall temperature offset
///   d(13)     corridor temperature offset
/// Disturbance w_k = (internal gains, solar gains, outside temperature).
struct BuildingParameters {
  int horizon = 192;
  Eigen::Matrix3d A;
  Eigen::Vector3d B;
  Eigen::Matrix3d W;
  Eigen::Vector3d x0{25.0, 24.0, 24.0};

  double multiplier_spread = 0.02;
  double initial_offset = 1.0;

  double t_min_day = 23.0;
  double t_min_night = 17.0;
  double t_max = 26.0;

  /// The horizon spans horizon_hours of schedule regardless of the number of steps.
  double start_hour = 6.0;
  double day_start_hour = 6.0;
  double day_hours = 12.0;
  double horizon_hours = 48.0;

  Eigen::Vector3d w_day_lower{4.0, 4.0, 6.0};
  Eigen::Vector3d w_day_upper{6.0, 6.0, 8.0};
  Eigen::Vector3d w_night_lower{0.0, 0.0, 2.0};
  Eigen::Vector3d w_night_upper{2.0, 0.0, 4.0};

  double input_lower = -500.0;
  double input_upper = 1200.0;
  Eigen::Vector4d saturation_beta;
  SaturationForm saturation_form = SaturationForm::offset;

  /// Range of K keeping the indoor-temperature loop stable over the whole uncertainty box.
  double gain_lower = -400.0;
  double gain_upper = 0.0;
  double offset_bound = 20000.0;
};

BuildingParameters building_parameters(Scale scale);

/// Saturation constants as printed alongside the model (use with SaturationForm::printed).
Eigen::Vector4d building_printed_beta();

/// Refit of the offset form to the clamp onto [-500, 1200].
Eigen::Vector4d building_fitted_beta();

bool building_daytime(const BuildingParameters& params, int k);

struct BuildingModel {
  BuildingParameters params;
  std::vector<double> t_min;  // per step

  explicit BuildingModel(const BuildingParameters& p);

  template <typename Scalar>
  VectorX<Scalar> initial_state(const VectorX<Scalar>& d) const
  {
    VectorX<Scalar> x(3);
    x(0) = Scalar(params.x0(0));
    x(1) = params.x0(1) + d(12);
    x(2) = params.x0(2) + d(13);
    return x;
  }

  template <typename Scalar>
  VectorX<Scalar> dynamics(int /*k*/, const VectorX<Scalar>& x, const VectorX<Scalar>& u,
                           const VectorX<Scalar>& w, const VectorX<Scalar>& d) const
  {
    const Scalar u_sat = smooth_saturation(u(0), params.saturation_beta, params.saturation_form);
    VectorX<Scalar> next(3);
    for (int i = 0; i < 3; ++i) {
      Scalar acc = params.B(i) * d(9 + i) * u_sat;
      for (int j = 0; j < 3; ++j) {
        acc += params.A(i, j) * d(3 * i + j) * x(j);
        acc += params.W(i, j) * w(j);
      }
      next(i) = acc;
    }
    return next;
  }

  template <typename Scalar>
  VectorX<Scalar> policy(int k, const Eigen::Ref<const MatrixX<Scalar>>& x,
                         const VectorX<Scalar>& q, const VectorX<Scalar>& r) const
  {
    VectorX<Scalar> u(1);
    u(0) = r(0) * x(k, 0) + q(k);
    return u;
  }

  template <typename Scalar>
  Scalar stage_cost(int /*k*/, const VectorX<Scalar>& /*x*/, const VectorX<Scalar>& u,
                    const VectorX<Scalar>& /*w*/, const VectorX<Scalar>& /*d*/) const
  {
    return u(0) * u(0) / double(params.horizon);
  }

  template <typename Scalar>
  Scalar terminal_cost(const VectorX<Scalar>& /*x*/, const VectorX<Scalar>& /*w*/,
                       const VectorX<Scalar>& /*d*/) const
  {
    return Scalar(0.0);
  }

  template <typename Scalar>
  VectorX<Scalar> constraints(int k, const VectorX<Scalar>& x, const VectorX<Scalar>& /*u*/,
                              const VectorX<Scalar>& /*w*/, const VectorX<Scalar>& /*d*/) const
  {
    VectorX<Scalar> g(2);
    g(0) = t_min[k] - x(0);
    g(1) = x(0) - params.t_max;
    return g;
  }
};

ocp::ProblemDefinition building_problem(Scale scale);
ocp::ProblemDefinition building_problem(const BuildingParameters& params);

}  // namespace rlr::models

#endif  // RLR_MODELS_BUILDING_HPP
