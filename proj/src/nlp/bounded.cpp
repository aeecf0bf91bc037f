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

#include "rlr/nlp/bounded.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace rlr::nlp {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

struct CurvaturePair {
  Vector s;
  Vector y;
  double rho;
};

Vector project(const Vector& x, const Vector& lower, const Vector& upper)
{
  return x.cwiseMax(lower).cwiseMin(upper);
}

// Two-loop recursion restricted to the free coordinates (mask == 1).
Vector lbfgs_direction(const Vector& gradient, const Vector& mask,
                       const std::deque<CurvaturePair>& memory)
{
  Vector q = gradient.cwiseProduct(mask);
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    const auto& p = memory[i];
    alpha[i] = p.rho * p.s.cwiseProduct(mask).dot(q);
    q -= alpha[i] * p.y.cwiseProduct(mask);
  }
  double gamma = 1.0;
  if (!memory.empty()) {
    const auto& last = memory.back();
    gamma = last.s.dot(last.y) / last.y.squaredNorm();
  }
  Vector r = gamma * q;
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const auto& p = memory[i];
    const double beta = p.rho * p.y.cwiseProduct(mask).dot(r);
    r += (alpha[i] - beta) * p.s.cwiseProduct(mask);
  }
  return -r;
}

}  // namespace

Vector projected_gradient(const Vector& x, const Vector& gradient, const Vector& lower,
                          const Vector& upper)
{
  return x - project(x - gradient, lower, upper);
}

BoundedResult minimize_bounded(const ValueGradientFunction& f, const Vector& x0,
                               const Vector& lower, const Vector& upper,
                               const BoundedOptions& options, std::vector<Vector>* iterates,
                               std::vector<double>* values)
{
  const Index n = x0.size();
  BoundedResult result;
  result.x = project(x0, lower, upper);
  result.gradient.resize(n);
  result.value = f(result.x, &result.gradient);
  ++result.evaluations;
  if (!std::isfinite(result.value) || !result.gradient.allFinite()) {
    result.line_search_failed = true;
    result.projected_gradient_norm = std::numeric_limits<double>::infinity();
    return result;
  }
  if (iterates) iterates->push_back(result.x);
  if (values) values->push_back(result.value);

  std::deque<CurvaturePair> memory;
  Vector& x = result.x;
  Vector& g = result.gradient;
  Vector x_trial(n), g_trial(n);

  for (;;) {
    Vector pg = projected_gradient(x, g, lower, upper);
    result.projected_gradient_norm = pg.lpNorm<Eigen::Infinity>();
    if (result.projected_gradient_norm <= options.tolerance) {
      result.converged = true;
      return result;
    }
    if (result.iterations >= options.max_iterations) return result;
    ++result.iterations;

    // Coordinates within epsilon of a bound with the gradient pushing outward are held by
    // the projection; the quasi-Newton model acts on the rest.
    const double eps_active = std::min(1e-3, result.projected_gradient_norm);
    Vector mask = Vector::Ones(n);
    for (Index i = 0; i < n; ++i) {
      const bool at_lower = x(i) <= lower(i) + eps_active && g(i) > 0.0;
      const bool at_upper = x(i) >= upper(i) - eps_active && g(i) < 0.0;
      if (at_lower || at_upper) mask(i) = 0.0;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double scale = 1.0;
      if (!memory.empty()) {
        scale = memory.back().s.dot(memory.back().y) / memory.back().y.squaredNorm();
      }
      Vector direction = lbfgs_direction(g, mask, memory);
      direction += -scale * g.cwiseProduct(Vector::Ones(n) - mask);
      double slope = g.dot(direction);
      if (!(slope < 0.0) || !direction.allFinite()) {
        memory.clear();
        direction = -g;
        slope = g.dot(direction);
      }
      double step = 1.0;
      if (memory.empty()) step = std::min(1.0, 1.0 / std::max(1e-300, g.lpNorm<Eigen::Infinity>()));

      for (int backtrack = 0; backtrack < 60; ++backtrack, step *= 0.5) {
        x_trial = project(x + step * direction, lower, upper);
        const Vector dx = x_trial - x;
        if (dx.lpNorm<Eigen::Infinity>() <= kEpsilon * (1.0 + x.lpNorm<Eigen::Infinity>())) break;
        const double v = f(x_trial, &g_trial);
        ++result.evaluations;
        if (!std::isfinite(v) || !g_trial.allFinite()) continue;
        const double predicted = g.dot(dx);
        bool ok = v <= result.value + kArmijo * predicted;
        if (!ok && v <= result.value + 10.0 * kEpsilon * std::abs(result.value)) {
          // Round-off regime: accept if first-order optimality strictly improves.
          ok = projected_gradient(x_trial, g_trial, lower, upper).lpNorm<Eigen::Infinity>() <
               result.projected_gradient_norm;
        }
        if (!ok) continue;

        Vector s = dx;
        Vector y = g_trial - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
          memory.push_back({s, y, 1.0 / sy});
          if (int(memory.size()) > options.memory) memory.pop_front();
        }
        x = x_trial;
        g = g_trial;
        result.value = v;
        accepted = true;
        break;
      }
      if (!accepted) {
        if (memory.empty()) break;
        memory.clear();
      }
    }
    if (!accepted) {
      result.line_search_failed = true;
      result.projected_gradient_norm =
          projected_gradient(x, g, lower, upper).lpNorm<Eigen::Infinity>();
      result.converged = result.projected_gradient_norm <= options.tolerance;
      return result;
    }
    if (iterates) iterates->push_back(x);
    if (values) values->push_back(result.value);
  }
}

}  // namespace rlr::nlp
