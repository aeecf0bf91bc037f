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

#include "unit/oracles.hpp"

#include <cmath>
#include <limits>

namespace rlr::test {

double example1_polynomial(double t) { return 1.0 - t - t * t + t * t * t - t * t * t * t; }

GridMax1 grid_max(const std::function<double(double)>& f, double lo, double hi, int points)
{
  GridMax1 best{-std::numeric_limits<double>::infinity(), lo};
  for (int i = 0; i < points; ++i) {
    const double x = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    const double v = f(x);
    if (v > best.value) best = {v, x};
  }
  return best;
}

GridMaxN grid_max(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& lo,
                  const Eigen::VectorXd& hi, int per_axis)
{
  const Eigen::Index n = lo.size();
  GridMaxN best{-std::numeric_limits<double>::infinity(), lo};
  std::vector<int> idx(std::size_t(n), 0);
  Eigen::VectorXd x(n);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i) = per_axis == 1 ? lo(i) : lo(i) + (hi(i) - lo(i)) * idx[std::size_t(i)] / (per_axis - 1);
    }
    const double v = f(x);
    if (v > best.value) best = {v, x};
    Eigen::Index i = 0;
    while (i < n && ++idx[std::size_t(i)] == per_axis) idx[std::size_t(i++)] = 0;
    if (i == n) break;
  }
  return best;
}

Eigen::MatrixXd linear_recursion(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& W, const Eigen::VectorXd& x0,
                                 const Eigen::MatrixXd& u, const Eigen::MatrixXd& w)
{
  const Eigen::Index N = u.rows();
  Eigen::MatrixXd x(N + 1, x0.size());
  x.row(0) = x0.transpose();
  for (Eigen::Index k = 0; k < N; ++k) {
    Eigen::VectorXd next = A * x.row(k).transpose() + B * u.row(k).transpose();
    if (W.size() > 0) next += W * w.row(k).transpose();
    x.row(k + 1) = next.transpose();
  }
  return x;
}

double naive_G(const Eigen::MatrixXd& g, double cost, double gamma)
{
  double best = cost - gamma;
  for (Eigen::Index k = 0; k < g.rows(); ++k) {
    for (Eigen::Index h = 0; h < g.cols(); ++h) {
      if (g(k, h) > best) best = g(k, h);
    }
  }
  return best;
}

namespace {

double sigma(const Eigen::Vector4d& beta, double u)
{
  return beta(0) / (beta(1) + std::exp(-beta(2) * u)) + beta(3);
}

double sigma_prime(const Eigen::Vector4d& beta, double u)
{
  const double e = std::exp(-beta(2) * u);
  const double den = beta(1) + e;
  return beta(0) * beta(2) * e / (den * den);
}

Eigen::Matrix3d perturbed_A(const BuildingData& b, const Eigen::VectorXd& d)
{
  Eigen::Matrix3d A;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) A(i, j) = b.A(i, j) * d(3 * i + j);
  }
  return A;
}

Eigen::Vector3d perturbed_B(const BuildingData& b, const Eigen::VectorXd& d)
{
  return b.B.cwiseProduct(d.segment(9, 3));
}

Eigen::Vector3d initial(const BuildingData& b, const Eigen::VectorXd& d)
{
  return {b.x0(0), b.x0(1) + d(12), b.x0(2) + d(13)};
}

}  // namespace

double building_cost(const BuildingData& b, const Eigen::VectorXd& q, double K,
                     const Eigen::VectorXd& d, const Eigen::MatrixXd& w)
{
  const Eigen::Index N = q.size();
  const Eigen::Matrix3d A = perturbed_A(b, d);
  const Eigen::Vector3d B = perturbed_B(b, d);
  Eigen::Vector3d x = initial(b, d);
  double cost = 0.0;
  for (Eigen::Index k = 0; k < N; ++k) {
    const double u = K * x(0) + q(k);
    cost += u * u / double(N);
    x = A * x + B * sigma(b.beta, u) + b.W * w.row(k).transpose();
  }
  return cost;
}

Eigen::VectorXd building_cost_gradient(const BuildingData& b, const Eigen::VectorXd& q, double K,
                                       const Eigen::VectorXd& d, const Eigen::MatrixXd& w)
{
  const Eigen::Index N = q.size();
  const Eigen::Matrix3d A = perturbed_A(b, d);
  const Eigen::Vector3d B = perturbed_B(b, d);
  Eigen::Vector3d x = initial(b, d);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(3, N);  // dx_k / dq
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double u = K * x(0) + q(k);
    Eigen::RowVectorXd du = K * S.row(0);
    du(k) += 1.0;
    grad += (2.0 * u / double(N)) * du.transpose();
    S = A * S + B * (sigma_prime(b.beta, u) * du);
    x = A * x + B * sigma(b.beta, u) + b.W * w.row(k).transpose();
  }
  return grad;
}

Eigen::VectorXd lq_open_loop_optimum(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                     const Eigen::MatrixXd& P, const Eigen::VectorXd& x0, int N)
{
  const Eigen::Index nx = A.rows();
  const Eigen::Index nu = B.cols();
  // x_k = Phi_k x0 + Gamma_k u.
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N * nu, N * nu);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(N * nu);
  Eigen::MatrixXd Phi = Eigen::MatrixXd::Identity(nx, nx);
  Eigen::MatrixXd Gamma = Eigen::MatrixXd::Zero(nx, N * nu);
  for (int k = 0; k <= N; ++k) {
    const Eigen::MatrixXd& weight = k == N ? P : Q;
    const Eigen::VectorXd free = Phi * x0;
    H += Gamma.transpose() * weight * Gamma;
    c += Gamma.transpose() * weight * free;
    if (k == N) break;
    H.block(k * nu, k * nu, nu, nu) += R;
    Gamma = A * Gamma;
    Gamma.block(0, k * nu, nx, nu) += B;
    Phi = A * Phi;
  }
  return H.ldlt().solve(-c);
}

}  // namespace rlr::test
