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

#include "rlr/validation/validation.hpp"

#include "rlr/reduction/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>

namespace rlr::validation {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Evaluated {
  SampleRecord record;
  Eigen::VectorXd step_max;
};

}  // namespace

ocp::Scenariod sample_scenario(const ocp::UncertaintyBounds& bounds, std::uint64_t seed,
                               std::uint64_t index)
{
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                    std::uint32_t(index >> 32)};
  std::mt19937_64 rng(seq);
  auto draw = [&rng](double lo, double hi) {
    const double t = double(rng() >> 11) * 0x1.0p-53;
    return lo + t * (hi - lo);
  };
  ocp::Scenariod s;
  s.w.resize(bounds.w_lower.rows(), bounds.w_lower.cols());
  for (Index k = 0; k < s.w.rows(); ++k) {
    for (Index j = 0; j < s.w.cols(); ++j) s.w(k, j) = draw(bounds.w_lower(k, j), bounds.w_upper(k, j));
  }
  s.d.resize(bounds.d_lower.size());
  for (Index i = 0; i < s.d.size(); ++i) s.d(i) = draw(bounds.d_lower(i), bounds.d_upper(i));
  return s;
}

ValidationReport validate(const ocp::ProblemDefinition& problem,
                          const ocp::DecisionVectord& decision, std::size_t n_samples,
                          std::uint64_t seed, int threads)
{
  if (n_samples < 1) throw PreconditionError("validation needs at least one sample");
  problem.validate();
  problem.check_decision(decision);
  const int N = problem.dims.horizon;

  std::vector<Evaluated> evaluated(n_samples);
  reduction::parallel_for(n_samples, threads, [&](std::size_t i) {
    Evaluated& e = evaluated[i];
    e.record.index = i;
    e.step_max = Eigen::VectorXd::Constant(N, -kInf);
    const ocp::Scenariod s = sample_scenario(problem.bounds, seed, i);
    try {
      const ocp::Rolloutd r = ocp::rollout(problem, decision, s);
      e.record.where = ocp::evaluate_G(problem, r, decision.gamma);
      e.record.G = e.record.where.value;
      e.record.constraint_violation = ocp::max_constraint(r).value;
      if (r.g_values.cols() > 0) e.step_max = r.g_values.rowwise().maxCoeff();
    } catch (const ocp::DivergedRollout& ex) {
      e.record.diverged = true;
      e.record.G = kInf;
      e.record.constraint_violation = kInf;
      e.record.where.value = kInf;
      e.record.where.component = ocp::GComponent::constraint;
      e.record.where.step = ex.step();
      e.step_max.tail(std::max(0, N - std::min(ex.step(), N))).setConstant(kInf);
    }
  });

  ValidationReport report;
  report.samples = n_samples;
  report.seed = seed;
  report.max_violation = -kInf;
  report.max_G = -kInf;
  report.envelope = Eigen::VectorXd::Constant(N, -kInf);
  std::size_t g_positive = 0;
  std::size_t c_positive = 0;
  report.records.reserve(n_samples);
  for (auto& e : evaluated) {
    const SampleRecord& rec = e.record;
    if (rec.G > 0.0) ++g_positive;
    if (rec.constraint_violation > 0.0) ++c_positive;
    if (rec.diverged) ++report.diverged;
    if (rec.constraint_violation > report.max_violation) {
      report.max_violation = rec.constraint_violation;
      report.worst_index = rec.index;
    }
    report.max_G = std::max(report.max_G, rec.G);
    report.envelope = report.envelope.cwiseMax(e.step_max);
    report.records.push_back(rec);
  }
  report.violation_rate = double(g_positive) / double(n_samples);
  report.constraint_violation_rate = double(c_positive) / double(n_samples);
  report.worst_scenario = sample_scenario(problem.bounds, seed, report.worst_index);
  return report;
}

void write_csv(std::ostream& out, const ocp::ProblemDefinition& problem,
               const ValidationReport& report)
{
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "# problem," << problem.name << "\n";
  out << "# samples," << report.samples << "\n";
  out << "# seed," << report.seed << "\n";
  out << "# max_violation," << report.max_violation << "\n";
  out << "# max_G," << report.max_G << "\n";
  out << "# violation_rate," << report.violation_rate << "\n";
  out << "# constraint_violation_rate," << report.constraint_violation_rate << "\n";
  out << "# diverged," << report.diverged << "\n";
  out << "# worst_index," << report.worst_index << "\n";
  out << "index,G,constraint_violation,component,step,row\n";
  for (const auto& rec : report.records) {
    std::string component = "cost";
    if (rec.diverged) {
      component = "diverged";
    } else if (rec.where.component == ocp::GComponent::constraint) {
      component = rec.where.row >= 0 && rec.where.row < int(problem.constraint_names.size())
                      ? problem.constraint_names[rec.where.row]
                      : "g" + std::to_string(rec.where.row);
    }
    out << rec.index << ',' << rec.G << ',' << rec.constraint_violation << ',' << component << ','
        << rec.where.step << ',' << rec.where.row << '\n';
  }
  out.precision(precision);
}

void write_trajectories_csv(std::ostream& out, const ocp::ProblemDefinition& problem,
                            const ocp::DecisionVectord& decision, const ValidationReport& report,
                            const std::vector<std::size_t>& indices)
{
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "sample,k";
  for (int i = 0; i < problem.dims.n_x; ++i) out << ",x" << i;
  for (int i = 0; i < problem.dims.n_u; ++i) out << ",u" << i;
  out << '\n';
  for (std::size_t index : indices) {
    const ocp::Scenariod s = sample_scenario(problem.bounds, report.seed, index);
    ocp::Rolloutd r;
    try {
      r = ocp::rollout(problem, decision, s);
    } catch (const ocp::DivergedRollout&) {
      continue;
    }
    for (Index k = 0; k < r.x.rows(); ++k) {
      out << index << ',' << k;
      for (Index i = 0; i < r.x.cols(); ++i) out << ',' << r.x(k, i);
      for (Index i = 0; i < r.u.cols(); ++i) {
        out << ',';
        if (k < r.u.rows()) out << r.u(k, i);
      }
      out << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace rlr::validation
