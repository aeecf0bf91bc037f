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

#include "rlr/ocp/problem.hpp"

#include <sstream>

namespace rlr::ocp {

namespace {

void require(bool condition, const std::string& message)
{
  if (!condition) throw PreconditionError(message);
}

std::string shape(Index rows, Index cols)
{
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

}  // namespace

void UncertaintyBounds::validate() const
{
  require(w_lower.rows() == w_upper.rows() && w_lower.cols() == w_upper.cols(),
          "disturbance bounds have mismatched shapes " + shape(w_lower.rows(), w_lower.cols()) +
              " and " + shape(w_upper.rows(), w_upper.cols()));
  require(d_lower.size() == d_upper.size(), "parameter bounds have mismatched lengths");
  require(w_lower.allFinite() && w_upper.allFinite(), "disturbance bounds must be finite");
  require(d_lower.allFinite() && d_upper.allFinite(), "parameter bounds must be finite");
  require((w_lower.array() <= w_upper.array()).all(), "disturbance lower bound exceeds upper bound");
  require((d_lower.array() <= d_upper.array()).all(), "parameter lower bound exceeds upper bound");
}

bool UncertaintyBounds::contains(const Scenariod& s, double tol) const
{
  if (s.w.rows() != w_lower.rows() || s.w.cols() != w_lower.cols()) return false;
  if (s.d.size() != d_lower.size()) return false;
  return (s.w.array() >= w_lower.array() - tol).all() &&
         (s.w.array() <= w_upper.array() + tol).all() &&
         (s.d.array() >= d_lower.array() - tol).all() && (s.d.array() <= d_upper.array() + tol).all();
}

Scenariod UncertaintyBounds::center() const
{
  return {0.5 * (w_lower + w_upper), 0.5 * (d_lower + d_upper)};
}

Scenariod UncertaintyBounds::clamp(const Scenariod& s) const
{
  return {s.w.cwiseMax(w_lower).cwiseMin(w_upper), s.d.cwiseMax(d_lower).cwiseMin(d_upper)};
}

bool UncertaintyBounds::degenerate() const
{
  return (w_lower.array() == w_upper.array()).all() && (d_lower.array() == d_upper.array()).all();
}

void ProblemDefinition::validate() const
{
  require(dims.horizon > 0, "horizon must be positive");
  require(dims.n_x > 0 && dims.n_u >= 0 && dims.n_w >= 0 && dims.n_d >= 0 && dims.n_q >= 0 &&
              dims.n_r >= 0 && dims.n_g >= 0,
          "dimensions must be non-negative (n_x positive)");
  require(x0.size() == dims.n_x, "x0 has length " + std::to_string(x0.size()) + ", expected " +
                                     std::to_string(dims.n_x));
  require(static_cast<bool>(functions), "problem '" + name + "' is missing a callable");
  bounds.validate();
  require(bounds.w_lower.rows() == dims.horizon && bounds.w_lower.cols() == dims.n_w,
          "disturbance bounds are " + shape(bounds.w_lower.rows(), bounds.w_lower.cols()) +
              ", expected " + shape(dims.horizon, dims.n_w));
  require(bounds.d_lower.size() == dims.n_d, "parameter bounds have length " +
                                                 std::to_string(bounds.d_lower.size()) +
                                                 ", expected " + std::to_string(dims.n_d));
  const auto& db = decision_bounds;
  require(db.q_lower.size() == dims.n_q && db.q_upper.size() == dims.n_q,
          "q bounds must have length n_q = " + std::to_string(dims.n_q));
  require(db.r_lower.size() == dims.n_r && db.r_upper.size() == dims.n_r,
          "r bounds must have length n_r = " + std::to_string(dims.n_r));
  require((db.q_lower.array() <= db.q_upper.array()).all() &&
              (db.r_lower.array() <= db.r_upper.array()).all(),
          "decision lower bound exceeds upper bound");
  check_decision(initial_decision);
  require(constraint_names.empty() || constraint_names.size() == std::size_t(dims.n_g),
          "constraint_names must be empty or have n_g entries");
}

void ProblemDefinition::check_decision(const DecisionVectord& decision) const
{
  require(decision.q.size() == dims.n_q, "decision q has length " +
                                             std::to_string(decision.q.size()) + ", expected " +
                                             std::to_string(dims.n_q));
  require(decision.r.size() == dims.n_r, "decision r has length " +
                                             std::to_string(decision.r.size()) + ", expected " +
                                             std::to_string(dims.n_r));
  require(decision.q.allFinite() && decision.r.allFinite() && std::isfinite(decision.gamma),
          "decision entries must be finite");
}

void ProblemDefinition::check_scenario(const Scenariod& scenario) const
{
  require(scenario.w.rows() == dims.horizon && scenario.w.cols() == dims.n_w,
          "scenario w is " + shape(scenario.w.rows(), scenario.w.cols()) + ", expected " +
              shape(dims.horizon, dims.n_w));
  require(scenario.d.size() == dims.n_d, "scenario d has length " +
                                             std::to_string(scenario.d.size()) + ", expected " +
                                             std::to_string(dims.n_d));
}

Eigen::VectorXd flatten(const Scenariod& s)
{
  Eigen::VectorXd z(s.w.size() + s.d.size());
  Index i = 0;
  for (Index k = 0; k < s.w.rows(); ++k)
    for (Index j = 0; j < s.w.cols(); ++j) z(i++) = s.w(k, j);
  z.tail(s.d.size()) = s.d;
  return z;
}

Scenariod unflatten(const Eigen::Ref<const Eigen::VectorXd>& z, const Dimensions& dims)
{
  require(z.size() == dims.scenario_size(), "flattened scenario has wrong length");
  Scenariod s;
  s.w.resize(dims.horizon, dims.n_w);
  Index i = 0;
  for (Index k = 0; k < dims.horizon; ++k)
    for (Index j = 0; j < dims.n_w; ++j) s.w(k, j) = z(i++);
  s.d = z.tail(dims.n_d);
  return s;
}

Eigen::VectorXd flatten(const DecisionVectord& decision)
{
  Eigen::VectorXd z(decision.q.size() + decision.r.size());
  z << decision.q, decision.r;
  return z;
}

DecisionVectord unflatten_decision(const Eigen::Ref<const Eigen::VectorXd>& z,
                                   const Dimensions& dims, double gamma)
{
  require(z.size() == dims.decision_size(), "flattened decision has wrong length");
  return {z.head(dims.n_q), z.segment(dims.n_q, dims.n_r), gamma};
}

}  // namespace rlr::ocp
