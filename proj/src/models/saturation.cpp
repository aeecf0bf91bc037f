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

#include "rlr/models/saturation.hpp"

#include "rlr/nlp/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rlr::models {

std::pair<double, double> saturation_asymptotes(const Eigen::Vector4d& beta, SaturationForm form)
{
  // exp(-beta2 u) -> inf as u -> -inf when beta2 > 0.
  const double at_zero_exp =
      form == SaturationForm::offset ? beta(0) / beta(1) + beta(3) : beta(0) / (beta(1) + beta(3));
  const double at_inf_exp = form == SaturationForm::offset ? beta(3) : 0.0;
  if (beta(2) >= 0.0) return {at_inf_exp, at_zero_exp};
  return {at_zero_exp, at_inf_exp};
}

Eigen::Vector4d fit_saturation(double lower, double upper)
{
  if (!(upper > lower)) throw PreconditionError("fit_saturation needs upper > lower");
  const double range = upper - lower;
  constexpr int kPoints = 2001;
  const Eigen::VectorXd u =
      Eigen::VectorXd::LinSpaced(kPoints, lower - 0.5 * range, upper + 0.5 * range);
  const Eigen::VectorXd target = u.cwiseMax(lower).cwiseMin(upper);

  // Parameters (log beta1, log beta2); residuals normalised by the range.
  auto residual_sum = [&](const Eigen::VectorXd& p) {
    const double b1 = std::exp(p(0));
    const double b2 = std::exp(p(1));
    double sum = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double s = range * b1 / (b1 + std::exp(-b2 * u(i))) + lower;
      const double r = (s - target(i)) / range;
      sum += r * r;
    }
    return sum / kPoints;
  };
  auto residual_gradient = [&](const Eigen::VectorXd& p) {
    const double b1 = std::exp(p(0));
    const double b2 = std::exp(p(1));
    Eigen::VectorXd g = Eigen::VectorXd::Zero(2);
    for (int i = 0; i < kPoints; ++i) {
      const double e = std::exp(-b2 * u(i));
      const double denom = b1 + e;
      const double s = range * b1 / denom + lower;
      const double r = (s - target(i)) / range;
      const double ds_dlog_b1 = range * b1 * e / (denom * denom);
      const double ds_dlog_b2 = range * b1 * e * u(i) * b2 / (denom * denom);
      g(0) += 2.0 * r * ds_dlog_b1 / range;
      g(1) += 2.0 * r * ds_dlog_b2 / range;
    }
    return Eigen::VectorXd(g / kPoints);
  };

  nlp::NlpProblem problem;
  problem.n = 2;
  problem.objective = residual_sum;
  problem.objective_gradient = residual_gradient;
  const double mid = 0.5 * (lower + upper);
  const double b2_init = 4.0 / range;
  Eigen::VectorXd start(2);
  start << -b2_init * mid, std::log(b2_init);
  nlp::NlpOptions options;
  options.tolerance = 1e-13;
  options.scale = false;
  const nlp::NlpResult fit = nlp::minimize(problem, start, options);

  const double b1 = std::exp(fit.x_star(0));
  const double b2 = std::exp(fit.x_star(1));
  return {range * b1, b1, b2, lower};
}

}  // namespace rlr::models
