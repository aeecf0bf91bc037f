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

#include "rlr/nlp/nlp.hpp"

#include "rlr/nlp/bounded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rlr::nlp {

std::string to_string(Status status)
{
  switch (status) {
    case Status::converged:
      return "converged";
    case Status::acceptable:
      return "acceptable";
    case Status::max_iterations:
      return "max_iterations";
    case Status::line_search_failure:
      return "line_search_failure";
  }
  return "unknown";
}

namespace {

double step_for(double xi) { return std::max(1e-6, 1e-7 * std::abs(xi)); }

std::string coordinate_message(Index i, double xi)
{
  std::ostringstream os;
  os << "non-finite evaluation while differencing coordinate " << i << " (x = " << xi << ")";
  return os.str();
}

// Evaluation wrapper that fills in finite differences for missing derivatives.
struct Oracle {
  const NlpProblem& nlp;
  Index m = 0;
  long evaluations = 0;

  double objective(const Vector& x)
  {
    ++evaluations;
    return nlp.objective(x);
  }

  Vector gradient(const Vector& x)
  {
    if (nlp.objective_gradient) return nlp.objective_gradient(x);
    evaluations += 2 * x.size();
    return finite_difference_gradient(nlp.objective, x);
  }

  Vector constraints(const Vector& x)
  {
    if (m == 0) return Vector(0);
    return nlp.inequality(x);
  }

  Matrix jacobian(const Vector& x)
  {
    if (nlp.inequality_jacobian) return nlp.inequality_jacobian(x);
    evaluations += 2 * x.size();
    return finite_difference_jacobian(nlp.inequality, x);
  }

  Vector jacobian_product(const Vector& x, const Vector& mu)
  {
    if (nlp.inequality_jacobian_product) return nlp.inequality_jacobian_product(x, mu);
    return jacobian(x).transpose() * mu;
  }
};

Vector expand_bound(const Vector& b, Index n, double fill)
{
  if (b.size() == 0) return Vector::Constant(n, fill);
  if (b.size() != n) throw PreconditionError("box bound length does not match n");
  return b;
}

}  // namespace

Vector finite_difference_gradient(const ScalarFunction& f, const Vector& x, DifferenceScheme scheme)
{
  Vector grad(x.size());
  Vector xp = x;
  double f0 = 0.0;
  if (scheme == DifferenceScheme::forward) {
    f0 = f(x);
    if (!std::isfinite(f0)) throw std::domain_error("non-finite evaluation at the base point");
  }
  for (Index i = 0; i < x.size(); ++i) {
    const double h = step_for(x(i));
    xp(i) = x(i) + h;
    const double fp = f(xp);
    double fm = f0;
    if (scheme == DifferenceScheme::central) {
      xp(i) = x(i) - h;
      fm = f(xp);
    }
    xp(i) = x(i);
    if (!std::isfinite(fp) || !std::isfinite(fm)) throw std::domain_error(coordinate_message(i, x(i)));
    grad(i) = scheme == DifferenceScheme::central ? (fp - fm) / (2.0 * h) : (fp - fm) / h;
  }
  return grad;
}

Matrix finite_difference_jacobian(const VectorFunction& f, const Vector& x, DifferenceScheme scheme)
{
  Vector f0;
  if (scheme == DifferenceScheme::forward) f0 = f(x);
  Matrix jac;
  Vector xp = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double h = step_for(x(i));
    xp(i) = x(i) + h;
    const Vector fp = f(xp);
    Vector fm = f0;
    if (scheme == DifferenceScheme::central) {
      xp(i) = x(i) - h;
      fm = f(xp);
    }
    xp(i) = x(i);
    if (!fp.allFinite() || !fm.allFinite()) throw std::domain_error(coordinate_message(i, x(i)));
    if (i == 0) jac.resize(fp.size(), x.size());
    jac.col(i) = scheme == DifferenceScheme::central ? (fp - fm) / (2.0 * h) : (fp - fm) / h;
  }
  return jac;
}

double relative_mismatch(const Eigen::Ref<const Matrix>& analytic, const Eigen::Ref<const Matrix>& reference)
{
  if (reference.size() == 0) return 0.0;
  const double denom = std::max(1.0, reference.cwiseAbs().maxCoeff());
  return (analytic - reference).cwiseAbs().maxCoeff() / denom;
}

NlpResult minimize(const NlpProblem& nlp, const Vector& x_init, const NlpOptions& options)
{
  const Index n = nlp.n;
  if (x_init.size() != n) throw PreconditionError("x_init length does not match n");
  if (!x_init.allFinite()) throw PreconditionError("x_init must be finite");
  if (!nlp.objective) throw PreconditionError("NlpProblem has no objective");

  const Vector lower = expand_bound(nlp.box_lower, n, -std::numeric_limits<double>::infinity());
  const Vector upper = expand_bound(nlp.box_upper, n, std::numeric_limits<double>::infinity());
  if ((lower.array() > upper.array()).any()) throw PreconditionError("box_lower exceeds box_upper");

  Oracle oracle{nlp};
  Vector x = x_init.cwiseMax(lower).cwiseMin(upper);
  const double f_init = oracle.objective(x);
  if (!std::isfinite(f_init)) throw PreconditionError("objective is not finite at x_init");
  const Vector c_init = nlp.inequality ? nlp.inequality(x) : Vector(0);
  oracle.m = c_init.size();
  const Index m = oracle.m;

  if (options.check_gradients) {
    if (nlp.objective_gradient) {
      const double err = relative_mismatch(nlp.objective_gradient(x),
                                           finite_difference_gradient(nlp.objective, x));
      if (err > 1e-5) {
        throw GradientCheckError("objective gradient disagrees with finite differences (" +
                                 std::to_string(err) + ")");
      }
    }
    if (m > 0 && nlp.inequality_jacobian) {
      const double err = relative_mismatch(nlp.inequality_jacobian(x),
                                           finite_difference_jacobian(nlp.inequality, x));
      if (err > 1e-5) {
        throw GradientCheckError("constraint Jacobian disagrees with finite differences (" +
                                 std::to_string(err) + ")");
      }
    }
  }

  // Scale so the largest gradient entry of each function is at most 100 at the start.
  double objective_scale = 1.0;
  Vector constraint_scale = Vector::Ones(m);
  if (options.scale) {
    const double gmax = oracle.gradient(x).lpNorm<Eigen::Infinity>();
    if (std::isfinite(gmax) && gmax > 100.0) objective_scale = 100.0 / gmax;
    if (m > 0 && c_init.allFinite()) {
      const Matrix jac = oracle.jacobian(x);
      for (Index i = 0; i < m; ++i) {
        const double row = jac.row(i).lpNorm<Eigen::Infinity>();
        if (std::isfinite(row) && row > 100.0) constraint_scale(i) = 100.0 / row;
      }
    }
  }

  Vector lambda = Vector::Zero(m);
  double rho = options.initial_penalty;

  // Augmented Lagrangian (PHR) on the scaled problem.
  auto merit = [&](const Vector& z, Vector* grad) -> double {
    const double fz = oracle.objective(z);
    Vector c = oracle.constraints(z);
    if (!std::isfinite(fz) || !c.allFinite()) return std::numeric_limits<double>::infinity();
    c = c.cwiseProduct(constraint_scale);
    const Vector shifted = (lambda + rho * c).cwiseMax(0.0);
    const double value = objective_scale * fz + (shifted.squaredNorm() - lambda.squaredNorm()) / (2.0 * rho);
    if (grad) {
      *grad = objective_scale * oracle.gradient(z);
      if (m > 0 && (shifted.array() > 0.0).any()) {
        *grad += oracle.jacobian_product(z, shifted.cwiseProduct(constraint_scale));
      }
    }
    return value;
  };

  NlpResult result;
  double inner_tol = m == 0 ? options.tolerance : std::max(options.tolerance, 1e-2);
  double previous_infeasibility = std::numeric_limits<double>::infinity();
  bool line_search_failed = false;
  int acceptable_count = 0;
  int stalled = 0;
  double best_kkt = std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < std::max(1, options.max_outer_iterations); ++outer) {
    ++result.outer_iterations;
    std::vector<double> merits;
    BoundedOptions inner_options{inner_tol, options.max_inner_iterations, options.memory};
    BoundedResult inner =
        minimize_bounded(merit, x, lower, upper, inner_options,
                         options.record_iterates ? &result.iterates : nullptr,
                         options.record_iterates ? &merits : nullptr);
    if (options.record_iterates) result.merit_history.push_back(std::move(merits));
    result.inner_iterations += inner.iterations;
    x = inner.x;
    line_search_failed = inner.line_search_failed && !inner.converged;

    const Vector c = oracle.constraints(x).cwiseProduct(constraint_scale);
    const Vector lambda_next = (lambda + rho * c).cwiseMax(0.0).cwiseMin(options.multiplier_max);
    const Vector grad_l = objective_scale * oracle.gradient(x) +
                          (m > 0 ? oracle.jacobian_product(x, lambda_next.cwiseProduct(constraint_scale))
                                 : Vector::Zero(n));
    const double stationarity = projected_gradient(x, grad_l, lower, upper).lpNorm<Eigen::Infinity>();
    const double complementarity = m > 0 ? lambda_next.cwiseProduct(c).cwiseAbs().maxCoeff() : 0.0;
    const double violation = m > 0 ? std::max(0.0, c.maxCoeff()) : 0.0;
    double infeasibility = 0.0;
    for (Index i = 0; i < m; ++i) {
      infeasibility = std::max(infeasibility, std::abs(std::min(-c(i), lambda(i) / rho)));
    }

    lambda = lambda_next;
    result.kkt_residual = std::max(stationarity, complementarity);
    const bool kkt_ok = stationarity <= options.tolerance && complementarity <= options.tolerance &&
                        violation <= options.tolerance;
    if (kkt_ok) {
      result.status = Status::converged;
      break;
    }
    if (m == 0) break;
    const bool acceptable = stationarity <= options.acceptable_tolerance &&
                            complementarity <= options.acceptable_tolerance &&
                            violation <= options.tolerance;
    acceptable_count = acceptable ? acceptable_count + 1 : 0;
    if (acceptable_count >= options.acceptable_iterations) {
      result.status = Status::acceptable;
      break;
    }
    stalled = !inner.converged && result.kkt_residual >= 0.9 * best_kkt ? stalled + 1 : 0;
    best_kkt = std::min(best_kkt, result.kkt_residual);
    if (stalled >= options.max_stalled_iterations) break;
    if (line_search_failed && inner.iterations == 0 && inner_tol <= options.tolerance &&
        infeasibility >= previous_infeasibility) {
      break;
    }
    // An unconverged inner solve says nothing about the penalty being too small.
    if (inner.converged && infeasibility > 0.5 * previous_infeasibility) {
      rho = std::min(rho * options.penalty_growth, options.max_penalty);
    }
    previous_infeasibility = infeasibility;
    inner_tol = std::max(options.tolerance, 0.1 * inner_tol);
  }

  if (result.status == Status::max_iterations && line_search_failed) {
    result.status = Status::line_search_failure;
  }
  result.x_star = x;
  result.objective_value = oracle.objective(x);
  const Vector c_final = oracle.constraints(x);
  result.constraint_violation = m > 0 ? std::max(0.0, c_final.maxCoeff()) : 0.0;
  result.multipliers = lambda.cwiseProduct(constraint_scale) / objective_scale;
  result.evaluations = oracle.evaluations;
  return result;
}

NlpResult maximize(const NlpProblem& nlp, const Vector& x_init, const NlpOptions& options)
{
  NlpProblem negated = nlp;
  negated.objective = [f = nlp.objective](const Vector& x) { return -f(x); };
  if (nlp.objective_gradient) {
    negated.objective_gradient = [g = nlp.objective_gradient](const Vector& x) -> Vector { return -g(x); };
  }
  NlpResult result = minimize(negated, x_init, options);
  result.objective_value = -result.objective_value;
  return result;
}

}  // namespace rlr::nlp
