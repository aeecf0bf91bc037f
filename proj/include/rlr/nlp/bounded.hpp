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

#ifndef RLR_NLP_BOUNDED_HPP
#define RLR_NLP_BOUNDED_HPP

#include "rlr/nlp/nlp.hpp"

namespace rlr::nlp {

/// Objective with optional gradient output (gradient is null for value-only requests).
using ValueGradientFunction = std::function<double(const Vector& x, Vector* gradient)>;

struct BoundedOptions {
  double tolerance = 1e-8;
  int max_iterations = 3000;
  int memory = 10;
};

struct BoundedResult {
  Vector x;
  double value = 0.0;
  Vector gradient;
  double projected_gradient_norm = 0.0;
  int iterations = 0;
  long evaluations = 0;
  bool converged = false;
  bool line_search_failed = false;
};

/// x - P(x - g): zero exactly at first-order points of a box-constrained problem.
Vector projected_gradient(const Vector& x, const Vector& gradient, const Vector& lower,
                          const Vector& upper);

/// Projected limited-memory BFGS for min f(x) on a box.
///
/// Variables in the epsilon-active set take a scaled projected-gradient step, the free ones a
/// two-loop L-BFGS step; the step length is chosen by Armijo backtracking along the projection
/// arc, so every iterate lies inside the box.
BoundedResult minimize_bounded(const ValueGradientFunction& f, const Vector& x0,
                               const Vector& lower, const Vector& upper,
                               const BoundedOptions& options, std::vector<Vector>* iterates = nullptr,
                               std::vector<double>* values = nullptr);

}  // namespace rlr::nlp

#endif  // RLR_NLP_BOUNDED_HPP
