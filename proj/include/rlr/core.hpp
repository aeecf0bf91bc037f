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

#ifndef RLR_CORE_HPP
#define RLR_CORE_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include <cmath>
#include <stdexcept>
#include <string>

namespace rlr {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Forward-mode scalar with a dynamically sized derivative vector.
using ADScalar = Eigen::AutoDiffScalar<Eigen::VectorXd>;

/// Value part of a scalar, for both plain and automatic-differentiation scalars.
inline double value_of(double v) { return v; }
inline double value_of(const ADScalar& v) { return v.value(); }

template <typename Scalar>
bool is_finite(const Scalar& v)
{
  return std::isfinite(value_of(v));
}

/// Raised when a function receives arguments violating its documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Seeds a vector of active variables: entry i gets unit derivative at offset + i.
inline VectorX<ADScalar> seed_variables(const Eigen::Ref<const Eigen::VectorXd>& values,
                                        Index offset, Index total)
{
  VectorX<ADScalar> out(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    out(i).value() = values(i);
    out(i).derivatives() = Eigen::VectorXd::Unit(total, offset + i);
  }
  return out;
}

/// Lifts constants into the AD type with zero derivatives of the given width.
inline VectorX<ADScalar> constant_variables(const Eigen::Ref<const Eigen::VectorXd>& values,
                                            Index total)
{
  VectorX<ADScalar> out(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    out(i).value() = values(i);
    out(i).derivatives() = Eigen::VectorXd::Zero(total);
  }
  return out;
}

/// Gives constant AD entries (empty derivative vectors) explicit zero derivatives of the given
/// width. Eigen's AutoDiffScalar does not reconcile widths inside nested expressions.
inline void widen_derivatives(VectorX<ADScalar>& v, Index width)
{
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i).derivatives().size() == 0) v(i).derivatives() = Eigen::VectorXd::Zero(width);
  }
}
inline void widen_derivatives(Eigen::VectorXd&, Index) {}

template <typename Scalar>
Eigen::VectorXd values_of(const VectorX<Scalar>& v)
{
  Eigen::VectorXd out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = value_of(v(i));
  return out;
}

}  // namespace rlr

#endif  // RLR_CORE_HPP
