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

#ifndef RLR_NLP_NLP_HPP
#define RLR_NLP_NLP_HPP

#include "rlr/core.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlr::nlp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarFunction = std::function<double(const Vector&)>;
using VectorFunction = std::function<Vector(const Vector&)>;
using JacobianFunction = std::function<Matrix(const Vector&)>;
/// (x, mu) -> J(x)^T mu, for callers that can exploit sparsity in mu.
using JacobianTransposeProduct = std::function<Vector(const Vector&, const Vector&)>;

/// min objective(x) s.t. inequality(x) <= 0, box_lower <= x <= box_upper.
///
/// Empty box vectors mean unbounded. Gradients are optional; missing ones are replaced by
/// central finite differences.
struct NlpProblem {
  Index n = 0;
  ScalarFunction objective;
  VectorFunction inequality;
  Vector box_lower;
  Vector box_upper;
  VectorFunction objective_gradient;
  JacobianFunction inequality_jacobian;
  JacobianTransposeProduct inequality_jacobian_product;
};

/// `acceptable`: the KKT measures stayed below NlpOptions::acceptable_tolerance (with the
/// violation below `tolerance`) for acceptable_iterations consecutive outer iterations.
enum class Status { converged, acceptable, max_iterations, line_search_failure };
std::string to_string(Status status);

struct NlpOptions {
  double tolerance = 1e-8;
  int max_outer_iterations = 200;
  int max_inner_iterations = 3000;
  int memory = 10;
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;
  double max_penalty = 1e12;
  double multiplier_max = 1e12;
  double acceptable_tolerance = 1e-6;
  int acceptable_iterations = 3;
  /// Outer iterations with an unconverged inner solve and no KKT progress before giving up.
  int max_stalled_iterations = 5;
  /// Gradient-based scaling of objective and constraints (largest gradient entry capped at 100).
  bool scale = true;
  /// Compare supplied gradients with finite differences at the initial point.
  bool check_gradients = false;
  bool record_iterates = false;
};

struct NlpResult {
  Vector x_star;
  double objective_value = 0.0;
  /// Scaled KKT measure: max of projected Lagrangian gradient and |lambda_i c_i|.
  double kkt_residual = 0.0;
  /// max(0, max_i inequality_i(x_star)) in the caller's units.
  double constraint_violation = 0.0;
  Status status = Status::max_iterations;
  Vector multipliers;
  int outer_iterations = 0;
  int inner_iterations = 0;
  long evaluations = 0;
  /// Filled when NlpOptions::record_iterates is set.
  std::vector<Vector> iterates;
  std::vector<std::vector<double>> merit_history;
};

class GradientCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

NlpResult minimize(const NlpProblem& nlp, const Vector& x_init, const NlpOptions& options = {});

/// Maximises the objective; objective_value is reported with the original sign.
NlpResult maximize(const NlpProblem& nlp, const Vector& x_init, const NlpOptions& options = {});

enum class DifferenceScheme { central, forward };

/// Step h_i = max(1e-6, 1e-7 |x_i|). Throws std::domain_error naming the coordinate when a
/// perturbed evaluation is non-finite.
Vector finite_difference_gradient(const ScalarFunction& f, const Vector& x,
                                  DifferenceScheme scheme = DifferenceScheme::central);
Matrix finite_difference_jacobian(const VectorFunction& f, const Vector& x,
                                  DifferenceScheme scheme = DifferenceScheme::central);

/// max |a - b| / max(1, max |b|), the measure used by the gradient check.
double relative_mismatch(const Eigen::Ref<const Matrix>& analytic,
                         const Eigen::Ref<const Matrix>& reference);

}  // namespace rlr::nlp

#endif  // RLR_NLP_NLP_HPP
