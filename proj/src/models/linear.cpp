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

#include "rlr/models/linear.hpp"

#include <limits>
#include <memory>

namespace rlr::models {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_shape(const Eigen::MatrixXd& m, Index rows, Index cols, const std::string& what)
{
  if (m.rows() != rows || m.cols() != cols) {
    throw PreconditionError(what + " must be " + std::to_string(rows) + "x" + std::to_string(cols) +
                            ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

struct LinearModel {
  LinearModelSpec spec;
  // Constraint rows: (is_state, index, sign, bound); g = sign * (value - bound).
  struct Row {
    bool state;
    Index index;
    double sign;
    double bound;
  };
  std::vector<Row> rows;

  explicit LinearModel(const LinearModelSpec& s) : spec(s)
  {
    for (Index i = 0; i < spec.x0.size(); ++i) {
      if (std::isfinite(spec.x_upper(i))) rows.push_back({true, i, 1.0, spec.x_upper(i)});
      if (std::isfinite(spec.x_lower(i))) rows.push_back({true, i, -1.0, spec.x_lower(i)});
    }
    for (Index i = 0; i < spec.B.cols(); ++i) {
      if (std::isfinite(spec.u_upper(i))) rows.push_back({false, i, 1.0, spec.u_upper(i)});
      if (std::isfinite(spec.u_lower(i))) rows.push_back({false, i, -1.0, spec.u_lower(i)});
    }
  }

  template <typename Scalar>
  VectorX<Scalar> initial_state(const VectorX<Scalar>& /*d*/) const
  {
    return spec.x0.cast<Scalar>();
  }

  template <typename Scalar>
  VectorX<Scalar> dynamics(int /*k*/, const VectorX<Scalar>& x, const VectorX<Scalar>& u,
                           const VectorX<Scalar>& w, const VectorX<Scalar>& d) const
  {
    VectorX<Scalar> next = spec.A * x + spec.B * u;
    if (w.size() > 0) next += spec.W * w;
    for (Index i = 0; i < d.size(); ++i) {
      if (spec.A_d[i].size() > 0) next += d(i) * (spec.A_d[i] * x);
      if (spec.B_d[i].size() > 0) next += d(i) * (spec.B_d[i] * u);
    }
    return next;
  }

  template <typename Scalar>
  VectorX<Scalar> policy(int k, const Eigen::Ref<const MatrixX<Scalar>>& x,
                         const VectorX<Scalar>& q, const VectorX<Scalar>& r) const
  {
    const Index n_u = spec.B.cols();
    const Index n_x = spec.A.rows();
    VectorX<Scalar> u = VectorX<Scalar>::Zero(n_u);
    for (Index i = 0; i < n_u; ++i) {
      Scalar acc(0.0);
      if (spec.offsets) acc = q(k * n_u + i);
      if (spec.feedback) {
        for (Index j = 0; j < n_x; ++j) acc += r(i * n_x + j) * x(k, j);
      }
      u(i) = acc;
    }
    return u;
  }

  template <typename Scalar>
  Scalar stage_cost(int /*k*/, const VectorX<Scalar>& x, const VectorX<Scalar>& u,
                    const VectorX<Scalar>& /*w*/, const VectorX<Scalar>& /*d*/) const
  {
    return (x.transpose() * spec.Q * x)(0) +
           (u.transpose() * spec.R * u)(0);
  }

  template <typename Scalar>
  Scalar terminal_cost(const VectorX<Scalar>& x, const VectorX<Scalar>& /*w*/,
                       const VectorX<Scalar>& /*d*/) const
  {
    return (x.transpose() * spec.P * x)(0);
  }

  template <typename Scalar>
  VectorX<Scalar> constraints(int k, const VectorX<Scalar>& x, const VectorX<Scalar>& u,
                              const VectorX<Scalar>& w, const VectorX<Scalar>& d) const
  {
    VectorX<Scalar> g(rows.size());
    if (rows.empty()) return g;
    const VectorX<Scalar> next = dynamics<Scalar>(k, x, u, w, d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& row = rows[i];
      const Scalar& value = row.state ? next(row.index) : u(row.index);
      g(i) = row.sign * (value - row.bound);
    }
    return g;
  }
};

}  // namespace

LinearModelSpec normalized(const LinearModelSpec& spec)
{
  LinearModelSpec s = spec;
  if (s.horizon <= 0) throw PreconditionError("linear model horizon must be positive");
  const Index n_x = s.A.rows();
  if (n_x == 0) throw PreconditionError("linear model A must be non-empty");
  require_shape(s.A, n_x, n_x, "A");
  if (s.B.rows() != n_x) throw PreconditionError("B must have " + std::to_string(n_x) + " rows");
  const Index n_u = s.B.cols();
  if (s.x0.size() == 0) s.x0 = Eigen::VectorXd::Zero(n_x);
  require_shape(s.x0, n_x, 1, "x0");

  const Index n_w = s.w_lower.size();
  require_shape(s.w_upper, n_w, 1, "w_upper");
  if (s.W.size() == 0) s.W = Eigen::MatrixXd::Zero(n_x, n_w);
  require_shape(s.W, n_x, n_w, "W");

  const Index n_d = s.d_lower.size();
  require_shape(s.d_upper, n_d, 1, "d_upper");
  s.A_d.resize(n_d);
  s.B_d.resize(n_d);
  for (Index i = 0; i < n_d; ++i) {
    if (s.A_d[i].size() > 0) require_shape(s.A_d[i], n_x, n_x, "A_d[" + std::to_string(i) + "]");
    if (s.B_d[i].size() > 0) require_shape(s.B_d[i], n_x, n_u, "B_d[" + std::to_string(i) + "]");
  }

  if (s.Q.size() == 0) s.Q = Eigen::MatrixXd::Zero(n_x, n_x);
  if (s.R.size() == 0) s.R = Eigen::MatrixXd::Zero(n_u, n_u);
  if (s.P.size() == 0) s.P = Eigen::MatrixXd::Zero(n_x, n_x);
  require_shape(s.Q, n_x, n_x, "Q");
  require_shape(s.R, n_u, n_u, "R");
  require_shape(s.P, n_x, n_x, "P");

  if (s.x_lower.size() == 0) s.x_lower = Eigen::VectorXd::Constant(n_x, -kInf);
  if (s.x_upper.size() == 0) s.x_upper = Eigen::VectorXd::Constant(n_x, kInf);
  if (s.u_lower.size() == 0) s.u_lower = Eigen::VectorXd::Constant(n_u, -kInf);
  if (s.u_upper.size() == 0) s.u_upper = Eigen::VectorXd::Constant(n_u, kInf);
  require_shape(s.x_lower, n_x, 1, "x_lower");
  require_shape(s.x_upper, n_x, 1, "x_upper");
  require_shape(s.u_lower, n_u, 1, "u_lower");
  require_shape(s.u_upper, n_u, 1, "u_upper");
  return s;
}

ocp::ProblemDefinition linear_problem(const LinearModelSpec& input)
{
  const LinearModelSpec s = normalized(input);
  auto model = std::make_shared<const LinearModel>(s);
  const int N = s.horizon;
  const int n_x = static_cast<int>(s.A.rows());
  const int n_u = static_cast<int>(s.B.cols());
  const int n_w = static_cast<int>(s.w_lower.size());
  const int n_d = static_cast<int>(s.d_lower.size());
  const int n_q = s.offsets ? N * n_u : 0;
  const int n_r = s.feedback ? n_u * n_x : 0;

  ocp::ProblemDefinition p;
  p.name = s.name;
  p.dims = {N, n_x, n_u, n_w, n_d, n_q, n_r, static_cast<int>(model->rows.size())};
  p.x0 = s.x0;
  p.bounds.w_lower = s.w_lower.transpose().replicate(N, 1);
  p.bounds.w_upper = s.w_upper.transpose().replicate(N, 1);
  p.bounds.d_lower = s.d_lower;
  p.bounds.d_upper = s.d_upper;
  p.decision_bounds.q_lower = Eigen::VectorXd::Constant(n_q, -s.offset_bound);
  p.decision_bounds.q_upper = Eigen::VectorXd::Constant(n_q, s.offset_bound);
  p.decision_bounds.r_lower = Eigen::VectorXd::Constant(n_r, -s.gain_bound);
  p.decision_bounds.r_upper = Eigen::VectorXd::Constant(n_r, s.gain_bound);
  p.initial_decision.q = Eigen::VectorXd::Zero(n_q);
  p.initial_decision.r = Eigen::VectorXd::Zero(n_r);
  p.initial_decision.gamma = 0.0;
  for (const auto& row : model->rows) {
    p.constraint_names.push_back((row.state ? "x" : "u") + std::to_string(row.index) +
                                 (row.sign > 0 ? "_max" : "_min"));
  }
  ocp::attach_model(p, model);
  p.validate();
  return p;
}

}  // namespace rlr::models
