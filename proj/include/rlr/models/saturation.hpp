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

#ifndef RLR_MODELS_SATURATION_HPP
#define RLR_MODELS_SATURATION_HPP

#include "rlr/core.hpp"

#include <utility>

namespace rlr::models {

/// Algebraic placement of the offset constant in the smooth saturation.
enum class SaturationForm {
  /// beta0 / (beta1 + exp(-beta2 u)) + beta3; asymptotes beta3 and beta3 + beta0 / beta1.
  offset,
  /// beta0 / (beta1 + exp(-beta2 u) + beta3), kept for comparison with the printed constants.
  printed,
};

template <typename Scalar>
Scalar smooth_saturation(const Scalar& u, const Eigen::Vector4d& beta,
                         SaturationForm form = SaturationForm::offset)
{
  using std::exp;
  const Scalar e = exp(-beta(2) * u);
  if (form == SaturationForm::printed) return beta(0) / (beta(1) + e + beta(3));
  return beta(0) / (beta(1) + e) + beta(3);
}

/// Limits of the saturation as u -> -inf and u -> +inf (ordered as returned, not sorted).
std::pair<double, double> saturation_asymptotes(const Eigen::Vector4d& beta, SaturationForm form);

/// Least-squares fit of the offset form to the hard clamp onto [lower, upper].
///
/// The asymptotes are pinned to the limits (beta3 = lower, beta0 = (upper - lower) beta1) and
/// (beta1, beta2) minimise the squared error on 2001 points spanning the limits widened by
/// half the range on each side.
Eigen::Vector4d fit_saturation(double lower, double upper);

}  // namespace rlr::models

#endif  // RLR_MODELS_SATURATION_HPP
