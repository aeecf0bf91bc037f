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

#include "rlr/reduction/local_reduction.hpp"

#include "rlr/nlp/bounded.hpp"
#include "rlr/reduction/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace rlr::reduction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double cost_scale(double gamma) { return std::max(1.0, std::abs(gamma)); }

/// Enforced entries (k, h) of g, in row-major step order.
std::vector<std::pair<int, int>> active_entries(const ocp::ProblemDefinition& problem)
{
  std::vector<std::pair<int, int>> entries;
  for (int k = 0; k < problem.dims.horizon; ++k) {
    for (int h = 0; h < problem.dims.n_g; ++h) {
      if (problem.is_active(k, h)) entries.emplace_back(k, h);
    }
  }
  return entries;
}

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::string to_string(UpperLevelMode mode)
{
  return mode == UpperLevelMode::per_component ? "per_component" : "per_row";
}

UpperLevelMode parse_upper_level_mode(const std::string& text)
{
  if (text == "per_component") return UpperLevelMode::per_component;
  if (text == "per_row") return UpperLevelMode::per_row;
  throw PreconditionError("unknown upper-level mode '" + text + "' (expected per_component or per_row)");
}

std::string to_string(RunStatus status)
{
  switch (status) {
    case RunStatus::success: return "success";
    case RunStatus::stalled: return "stalled";
    case RunStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

nlp::NlpOptions LocalReductionConfig::default_lower_options()
{
  nlp::NlpOptions options;
  options.tolerance = 1e-8;
  options.max_outer_iterations = 100;
  options.max_inner_iterations = 2000;
  return options;
}

void LocalReductionConfig::validate() const
{
  if (!(epsilon > 0.0)) throw PreconditionError("local_reduction.epsilon must be positive");
  if (!(tol_G > 0.0)) throw PreconditionError("local_reduction.tol_G must be positive");
  if (max_iterations < 1) throw PreconditionError("local_reduction.max_iterations must be at least 1");
  if (multistarts < 1) throw PreconditionError("local_reduction.multistarts must be at least 1");
  if (scenarios_per_iteration < 1) {
    throw PreconditionError("local_reduction.scenarios_per_iteration must be at least 1");
  }
  if (threads < 0) throw PreconditionError("threads must be non-negative");
  if (!(upper_tolerance > 0.0)) throw PreconditionError("local_reduction.upper_tolerance must be positive");
  if (upper_max_iterations < 1) {
    throw PreconditionError("local_reduction.upper_max_iterations must be at least 1");
  }
}

ocp::GEvaluation scaled_G(const ocp::Rolloutd& rollout, double gamma)
{
  ocp::GEvaluation out = ocp::max_constraint(rollout);
  const double cost_term = (rollout.cost - gamma) / cost_scale(gamma);
  if (cost_term >= out.value || std::isnan(cost_term)) {
    out.value = cost_term;
    out.component = ocp::GComponent::cost;
    out.step = -1;
    out.row = -1;
  }
  return out;
}

ocp::GEvaluation scaled_G(const ocp::ProblemDefinition& problem,
                          const ocp::DecisionVectord& decision, const ocp::Scenariod& scenario)
{
  try {
    return scaled_G(ocp::rollout(problem, decision, scenario), decision.gamma);
  } catch (const ocp::DivergedRollout& e) {
    ocp::GEvaluation out;
    out.value = kInf;
    out.component = ocp::GComponent::constraint;
    out.step = e.step();
    out.row = -1;
    return out;
  }
}

// ---------------------------------------------------------------------------------------------
// Lower level

namespace {

/// Constraint values and Jacobians of the substituted lower-level problem, cached per scenario.
class LowerLevelEvaluator {
 public:
  LowerLevelEvaluator(const ocp::ProblemDefinition& problem, const ScenarioSet& scenarios,
                      int threads, double cost_scale)
      : problem_(problem),
        cost_scale_(cost_scale),
        scenarios_(scenarios.scenarios()),
        entries_(active_entries(problem)),
        n_dec_(problem.dims.decision_size()),
        rows_per_scenario_(Index(entries_.size()) + 1),
        threads_(threads),
        value_x_(scenarios_.size()),
        values_(scenarios_.size()),
        jacobian_x_(scenarios_.size()),
        jacobians_(scenarios_.size())
  {
  }

  Index n() const { return n_dec_ + 1; }
  Index m() const { return Index(scenarios_.size()) * rows_per_scenario_; }

  Eigen::VectorXd constraints(const Eigen::VectorXd& y)
  {
    parallel_for(scenarios_.size(), threads_, [&](std::size_t i) { ensure_values(i, y); });
    Eigen::VectorXd c(m());
    for (std::size_t i = 0; i < scenarios_.size(); ++i) {
      c.segment(Index(i) * rows_per_scenario_, rows_per_scenario_) = values_[i];
    }
    return c;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& y)
  {
    parallel_for(scenarios_.size(), threads_, [&](std::size_t i) { ensure_jacobian(i, y); });
    Eigen::MatrixXd J(m(), n());
    for (std::size_t i = 0; i < scenarios_.size(); ++i) {
      J.middleRows(Index(i) * rows_per_scenario_, rows_per_scenario_) = jacobians_[i];
    }
    return J;
  }

  Eigen::VectorXd jacobian_product(const Eigen::VectorXd& y, const Eigen::VectorXd& mu)
  {
    std::vector<std::size_t> needed;
    for (std::size_t i = 0; i < scenarios_.size(); ++i) {
      if (mu.segment(Index(i) * rows_per_scenario_, rows_per_scenario_).cwiseAbs().maxCoeff() > 0.0) {
        needed.push_back(i);
      }
    }
    parallel_for(needed.size(), threads_, [&](std::size_t j) { ensure_jacobian(needed[j], y); });
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n());
    for (std::size_t i : needed) {
      out += jacobians_[i].transpose() * mu.segment(Index(i) * rows_per_scenario_, rows_per_scenario_);
    }
    return out;
  }

 private:
  ocp::DecisionVectord decision_of(const Eigen::VectorXd& y) const
  {
    return ocp::unflatten_decision(y.head(n_dec_), problem_.dims, y(n_dec_));
  }

  void ensure_values(std::size_t i, const Eigen::VectorXd& y)
  {
    if (value_x_[i].size() == y.size() && value_x_[i] == y) return;
    if (jacobian_x_[i].size() == y.size() && jacobian_x_[i] == y) return;
    Eigen::VectorXd& v = values_[i];
    v.resize(rows_per_scenario_);
    try {
      const ocp::Rolloutd r = ocp::rollout(problem_, decision_of(y), scenarios_[i]);
      for (std::size_t e = 0; e < entries_.size(); ++e) {
        v(Index(e)) = r.g_values(entries_[e].first, entries_[e].second);
      }
      v(Index(entries_.size())) = r.cost / cost_scale_ - y(n_dec_);
    } catch (const ocp::DivergedRollout&) {
      v.setConstant(std::numeric_limits<double>::quiet_NaN());
    }
    value_x_[i] = y;
  }

  void ensure_jacobian(std::size_t i, const Eigen::VectorXd& y)
  {
    if (jacobian_x_[i].size() == y.size() && jacobian_x_[i] == y) return;
    Eigen::VectorXd& v = values_[i];
    Eigen::MatrixXd& J = jacobians_[i];
    v.resize(rows_per_scenario_);
    J.setZero(rows_per_scenario_, n());
    try {
      const auto r = ocp::rollout_decision_derivatives(problem_, decision_of(y), scenarios_[i]);
      auto put = [&](Index row, const ADScalar& value) {
        v(row) = value.value();
        if (value.derivatives().size() == n_dec_) J.row(row).head(n_dec_) = value.derivatives().transpose();
      };
      for (std::size_t e = 0; e < entries_.size(); ++e) {
        put(Index(e), r.g_values(entries_[e].first, entries_[e].second));
      }
      const Index cost_row = Index(entries_.size());
      put(cost_row, r.cost);
      v(cost_row) = v(cost_row) / cost_scale_ - y(n_dec_);
      J.row(cost_row) /= cost_scale_;
      J(cost_row, n_dec_) = -1.0;
    } catch (const ocp::DivergedRollout&) {
      v.setConstant(std::numeric_limits<double>::quiet_NaN());
    }
    value_x_[i] = y;
    jacobian_x_[i] = y;
  }

  const ocp::ProblemDefinition& problem_;
  double cost_scale_;
  const std::vector<ocp::Scenariod>& scenarios_;
  std::vector<std::pair<int, int>> entries_;
  Index n_dec_;
  Index rows_per_scenario_;
  int threads_;
  std::vector<Eigen::VectorXd> value_x_;
  std::vector<Eigen::VectorXd> values_;
  std::vector<Eigen::VectorXd> jacobian_x_;
  std::vector<Eigen::MatrixXd> jacobians_;
};

double max_cost(const ocp::ProblemDefinition& problem, const ScenarioSet& scenarios,
                const ocp::DecisionVectord& decision)
{
  double worst = -kInf;
  for (const auto& s : scenarios) {
    try {
      worst = std::max(worst, ocp::rollout(problem, decision, s).cost);
    } catch (const ocp::DivergedRollout&) {
      return kInf;
    }
  }
  return worst;
}

}  // namespace

namespace {

/// One lower-level solve in scaled variables v: (q, r) = D v and gamma = s v_last.
nlp::NlpResult solve_lower_scaled(const ocp::ProblemDefinition& problem, const ScenarioSet& scenarios,
                                  const Eigen::VectorXd& y0, double s, const LocalReductionConfig& config)
{
  const Index n_dec = problem.dims.decision_size();
  const Index n = n_dec + 1;
  const auto& db = problem.decision_bounds;
  Eigen::VectorXd lower(n), upper(n);
  lower << db.q_lower, db.r_lower, -kInf;
  upper << db.q_upper, db.r_upper, kInf;
  Eigen::VectorXd D = Eigen::VectorXd::Ones(n);
  for (Index i = 0; i < n_dec; ++i) {
    const double half_range = 0.5 * (upper(i) - lower(i));
    if (std::isfinite(half_range) && half_range > 1.0) D(i) = half_range;
  }

  LowerLevelEvaluator evaluator(problem, scenarios, config.threads, s);
  auto to_y = [D](const Eigen::VectorXd& v) { return Eigen::VectorXd(D.cwiseProduct(v)); };

  nlp::NlpProblem nlp;
  nlp.n = n;
  nlp.objective = [n_dec](const Eigen::VectorXd& v) { return v(n_dec); };
  nlp.objective_gradient = [n_dec, n](const Eigen::VectorXd&) {
    return Eigen::VectorXd(Eigen::VectorXd::Unit(n, n_dec));
  };
  nlp.inequality = [&](const Eigen::VectorXd& v) { return evaluator.constraints(to_y(v)); };
  nlp.inequality_jacobian = [&](const Eigen::VectorXd& v) {
    return Eigen::MatrixXd(evaluator.jacobian(to_y(v)) * D.asDiagonal());
  };
  nlp.inequality_jacobian_product = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& mu) {
    return Eigen::VectorXd(D.cwiseProduct(evaluator.jacobian_product(to_y(v), mu)));
  };
  nlp.box_lower = lower.cwiseQuotient(D);
  nlp.box_upper = upper.cwiseQuotient(D);

  const Eigen::VectorXd v0 = y0.cwiseQuotient(D);
  nlp::NlpResult solved;
  try {
    solved = nlp::minimize(nlp, v0, config.lower_options);
  } catch (const PreconditionError&) {
    solved.x_star = v0;
    solved.status = nlp::Status::line_search_failure;
  }
  solved.x_star = to_y(solved.x_star);
  return solved;
}

}  // namespace

LowerLevelResult solve_lower(const ocp::ProblemDefinition& problem, const ScenarioSet& scenarios,
                             const ocp::DecisionVectord& warm_start,
                             const LocalReductionConfig& config)
{
  if (scenarios.empty()) throw PreconditionError("solve_lower needs a nonempty scenario set");
  problem.check_decision(warm_start);
  if (!problem.has_derivatives()) {
    throw PreconditionError("solve_lower needs a problem with derivative functions");
  }
  const Index n_dec = problem.dims.decision_size();
  const auto& db = problem.decision_bounds;
  Eigen::VectorXd dec_lower(n_dec), dec_upper(n_dec);
  dec_lower << db.q_lower, db.r_lower;
  dec_upper << db.q_upper, db.r_upper;

  LowerLevelResult out;
  out.decision = warm_start;
  out.decision.q = out.decision.q.cwiseMax(db.q_lower).cwiseMin(db.q_upper);
  out.decision.r = out.decision.r.cwiseMax(db.r_lower).cwiseMin(db.r_upper);
  const double gamma0 = max_cost(problem, scenarios, out.decision);
  if (std::isfinite(gamma0)) out.decision.gamma = gamma0;

  // The cost scale comes from the starting costs; when the optimum lies at a very different
  // magnitude (e.g. a zero start) the solve is repeated with the scale of the result.
  // Probing passes run a few outer iterations only; the final pass gets the full budget.
  constexpr int kProbes = 3;
  constexpr int kProbeOuterIterations = 5;
  double s = cost_scale(out.decision.gamma);
  for (int pass = 0; pass <= kProbes; ++pass) {
    const bool probe = pass < kProbes;
    LocalReductionConfig pass_config = config;
    if (probe) {
      pass_config.lower_options.max_outer_iterations =
          std::min(config.lower_options.max_outer_iterations, kProbeOuterIterations);
    }
    Eigen::VectorXd y0(n_dec + 1);
    y0 << ocp::flatten(out.decision), out.decision.gamma / s;
    const nlp::NlpResult solved = solve_lower_scaled(problem, scenarios, y0, s, pass_config);
    out.status = solved.status;
    out.outer_iterations += solved.outer_iterations;
    out.inner_iterations += solved.inner_iterations;
    out.decision = ocp::unflatten_decision(solved.x_star.head(n_dec), problem.dims, 0.0);
    const double gamma = max_cost(problem, scenarios, out.decision);
    out.decision.gamma = std::isfinite(gamma) ? gamma : s * solved.x_star(n_dec);
    if (!probe || solved.status == nlp::Status::converged || solved.status == nlp::Status::acceptable) break;
    const double next_scale = cost_scale(out.decision.gamma);
    if (next_scale > 10.0 * s || next_scale < 0.1 * s) s = next_scale;
  }

  out.max_G = -kInf;
  for (const auto& scenario : scenarios) {
    out.max_G = std::max(out.max_G, scaled_G(problem, out.decision, scenario).value);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Upper level

std::vector<ocp::Scenariod> upper_level_starts(const ocp::UncertaintyBounds& bounds, int count,
                                               std::uint64_t seed, std::uint64_t stream)
{
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream),
                    std::uint32_t(stream >> 32)};
  std::mt19937_64 rng(seq);
  const ocp::Scenariod center = bounds.center();
  const Eigen::VectorXd lo = ocp::flatten(ocp::Scenariod{bounds.w_lower, bounds.d_lower});
  const Eigen::VectorXd hi = ocp::flatten(ocp::Scenariod{bounds.w_upper, bounds.d_upper});
  ocp::Dimensions dims;
  dims.horizon = int(bounds.w_lower.rows());
  dims.n_w = int(bounds.w_lower.cols());
  dims.n_d = int(bounds.d_lower.size());

  // Only coordinates with a nonzero range distinguish corners.
  std::vector<Index> free;
  for (Index i = 0; i < lo.size(); ++i) {
    if (hi(i) > lo(i)) free.push_back(i);
  }
  const std::size_t corner_count =
      free.size() < 63 ? std::size_t(1) << free.size() : std::numeric_limits<std::size_t>::max();
  auto free_bits = [&free](const std::vector<bool>& corner) {
    std::vector<bool> bits;
    bits.reserve(free.size());
    for (Index i : free) bits.push_back(corner[std::size_t(i)]);
    return bits;
  };
  std::set<std::vector<bool>> corners_used;

  std::vector<ocp::Scenariod> starts;
  starts.reserve(std::max(count, 0));
  for (int s = 0; s < count; ++s) {
    if (s == 0) {
      starts.push_back(center);
      continue;
    }
    Eigen::VectorXd z(lo.size());
    if (s % 2 == 1) {
      // Corners are drawn without repetition until every corner of the box has been used.
      std::vector<bool> corner(std::size_t(z.size()));
      do {
        for (Index i = 0; i < z.size(); ++i) corner[std::size_t(i)] = uniform01(rng) >= 0.5;
      } while (corners_used.count(free_bits(corner)) > 0 && corners_used.size() < corner_count);
      corners_used.insert(free_bits(corner));
      for (Index i = 0; i < z.size(); ++i) z(i) = corner[std::size_t(i)] ? hi(i) : lo(i);
    } else {
      for (Index i = 0; i < z.size(); ++i) z(i) = lo(i) + uniform01(rng) * (hi(i) - lo(i));
    }
    starts.push_back(ocp::unflatten(z, dims));
  }
  return starts;
}

namespace {

struct Component {
  bool cost = false;
  int row = -1;
  int step = -1;  // fixed step in per_component mode, -1 to pick per start in per_row mode
};

/// Value and gradient of one smooth piece of G with respect to the flattened scenario.
double component_value(const ocp::ProblemDefinition& problem, const ocp::DecisionVectord& decision,
                       const Component& c, int step, const Eigen::VectorXd& z,
                       Eigen::VectorXd* gradient)
{
  const ocp::Scenariod s = ocp::unflatten(z, problem.dims);
  const double scale = cost_scale(decision.gamma);
  try {
    if (gradient == nullptr) {
      const ocp::Rolloutd r = ocp::rollout(problem, decision, s);
      return c.cost ? (r.cost - decision.gamma) / scale : r.g_values(step, c.row);
    }
    const auto r = ocp::rollout_scenario_derivatives(problem, decision, s);
    const ADScalar& v = c.cost ? r.cost : r.g_values(step, c.row);
    if (v.derivatives().size() == z.size()) {
      *gradient = v.derivatives();
    } else {
      gradient->setZero(z.size());
    }
    if (c.cost) {
      *gradient /= scale;
      return (v.value() - decision.gamma) / scale;
    }
    return v.value();
  } catch (const ocp::DivergedRollout&) {
    if (gradient != nullptr) gradient->setConstant(z.size(), std::numeric_limits<double>::quiet_NaN());
    return std::numeric_limits<double>::quiet_NaN();
  }
}

/// Largest enforced entry of row h at the given scenario.
int argmax_step(const ocp::Rolloutd& r, int row)
{
  int best = -1;
  double value = -kInf;
  for (int k = 0; k < r.g_values.rows(); ++k) {
    if (r.g_values(k, row) > value) {
      value = r.g_values(k, row);
      best = k;
    }
  }
  return best;
}

struct SubproblemResult {
  bool ok = false;
  Eigen::VectorXd z;
};

SubproblemResult maximize_component(const ocp::ProblemDefinition& problem,
                                    const ocp::DecisionVectord& decision, const Component& c,
                                    const Eigen::VectorXd& z0, const Eigen::VectorXd& lo,
                                    const Eigen::VectorXd& hi, const LocalReductionConfig& config)
{
  SubproblemResult out;
  out.z = z0;
  if (z0.size() == 0 || (lo.array() == hi.array()).all()) {
    out.ok = true;
    return out;
  }

  int step = c.step;
  if (!c.cost && step < 0) {
    try {
      step = argmax_step(ocp::rollout(problem, decision, ocp::unflatten(z0, problem.dims)), c.row);
    } catch (const ocp::DivergedRollout&) {
      return out;
    }
    if (step < 0) return out;
  }

  nlp::BoundedOptions options;
  options.tolerance = config.upper_tolerance;
  options.max_iterations = config.upper_max_iterations;

  // In per_row mode the maximising step may move; re-target a few times.
  const int switches = c.step < 0 && !c.cost ? 3 : 0;
  Eigen::VectorXd z = z0;
  for (int attempt = 0; attempt <= switches; ++attempt) {
    Eigen::VectorXd g0;
    const double v0 = component_value(problem, decision, c, step, z, &g0);
    if (!std::isfinite(v0) || !g0.allFinite()) return out;
    const double scale = 1.0 / std::max(1.0, g0.cwiseAbs().maxCoeff() / 100.0);
    auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      const double v = component_value(problem, decision, c, step, x, grad);
      if (grad != nullptr) *grad *= -scale;
      return -scale * v;
    };
    const nlp::BoundedResult r = nlp::minimize_bounded(f, z, lo, hi, options);
    z = r.x;
    if (switches == 0) break;
    int next = -1;
    try {
      next = argmax_step(ocp::rollout(problem, decision, ocp::unflatten(z, problem.dims)), c.row);
    } catch (const ocp::DivergedRollout&) {
      break;
    }
    if (next == step || next < 0) break;
    step = next;
  }
  out.ok = true;
  out.z = z;
  return out;
}

}  // namespace

std::vector<Candidate> find_worst_case(const ocp::ProblemDefinition& problem,
                                       const ocp::DecisionVectord& decision,
                                       const LocalReductionConfig& config, std::uint64_t stream)
{
  config.validate();
  problem.check_decision(decision);
  if (!problem.has_derivatives()) {
    throw PreconditionError("find_worst_case needs a problem with derivative functions");
  }

  const auto& bounds = problem.bounds;
  const Eigen::VectorXd lo = ocp::flatten(ocp::Scenariod{bounds.w_lower, bounds.d_lower});
  const Eigen::VectorXd hi = ocp::flatten(ocp::Scenariod{bounds.w_upper, bounds.d_upper});
  const std::vector<ocp::Scenariod> starts =
      upper_level_starts(bounds, config.multistarts, config.seed, stream);

  std::vector<Component> components;
  if (config.mode == UpperLevelMode::per_component) {
    for (const auto& [k, h] : active_entries(problem)) components.push_back({false, h, k});
  } else {
    std::vector<bool> row_used(problem.dims.n_g, false);
    for (const auto& [k, h] : active_entries(problem)) row_used[h] = true;
    for (int h = 0; h < problem.dims.n_g; ++h) {
      if (row_used[h]) components.push_back({false, h, -1});
    }
  }
  components.push_back({true, -1, -1});

  // Starts whose rollout diverges are worst cases in their own right and skip the local solve.
  std::vector<ocp::GEvaluation> start_eval(starts.size());
  for (std::size_t s = 0; s < starts.size(); ++s) start_eval[s] = scaled_G(problem, decision, starts[s]);

  const std::size_t tasks = starts.size() * components.size();
  std::vector<SubproblemResult> results(tasks);
  parallel_for(tasks, config.threads, [&](std::size_t t) {
    const std::size_t s = t / components.size();
    if (!std::isfinite(start_eval[s].value)) return;
    results[t] = maximize_component(problem, decision, components[t % components.size()],
                                    ocp::flatten(starts[s]), lo, hi, config);
  });

  std::vector<Candidate> all;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    if (std::isinf(start_eval[s].value) && start_eval[s].value > 0) {
      Candidate c;
      c.scenario = starts[s];
      c.G = kInf;
      c.measure = kInf;
      c.where = start_eval[s];
      c.start = int(s);
      all.push_back(std::move(c));
    }
  }
  for (std::size_t t = 0; t < tasks; ++t) {
    if (!results[t].ok) continue;
    Candidate c;
    c.scenario = bounds.clamp(ocp::unflatten(results[t].z, problem.dims));
    c.where = scaled_G(problem, decision, c.scenario);
    c.measure = c.where.value;
    c.G = std::isfinite(c.measure) ? ocp::evaluate_scenario(problem, decision, c.scenario).value : kInf;
    c.start = int(t / components.size());
    c.component = int(t % components.size());
    all.push_back(std::move(c));
  }
  if (all.empty()) {
    throw WorstCaseSearchError("worst-case search failed: no start point produced a finite rollout (" +
                               std::to_string(starts.size()) + " starts, " +
                               std::to_string(components.size()) + " subproblems each)");
  }

  std::stable_sort(all.begin(), all.end(),
                   [](const Candidate& a, const Candidate& b) { return a.measure > b.measure; });
  std::vector<Candidate> kept;
  for (auto& c : all) {
    bool duplicate = false;
    for (const auto& k : kept) {
      const double tol = std::max(config.tol_G, 1e-9 * std::abs(k.measure));
      const bool close = (std::isinf(k.measure) && std::isinf(c.measure)) ||
                         std::abs(k.measure - c.measure) <= tol;
      if (close && is_similar(k.scenario, c.scenario, config.epsilon)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(std::move(c));
  }
  return kept;
}

// ---------------------------------------------------------------------------------------------
// Outer loop

RunResult run(const ocp::ProblemDefinition& problem, const LocalReductionConfig& config,
              const ScenarioSet& initial_set,
              const std::optional<ocp::DecisionVectord>& initial_decision,
              const IterationCallback& on_iteration)
{
  config.validate();
  problem.validate();
  if (initial_set.empty()) throw PreconditionError("local reduction needs a nonempty initial scenario set");
  for (const auto& s : initial_set) problem.check_scenario(s);

  RunResult result;
  result.scenarios = initial_set;
  ocp::DecisionVectord decision = initial_decision.value_or(problem.initial_decision);
  problem.check_decision(decision);

  if (config.presolve_initial_set) {
    decision = solve_lower(problem, result.scenarios, decision, config).decision;
  } else {
    const double gamma = max_cost(problem, result.scenarios, decision);
    if (std::isfinite(gamma)) decision.gamma = gamma;
  }
  result.initial_decision = decision;

  bool epsilon_halved = false;
  for (int j = 1; j <= config.max_iterations; ++j) {
    IterationRecord record;
    record.iteration = j;

    const auto upper_start = Clock::now();
    const std::vector<Candidate> candidates =
        find_worst_case(problem, decision, config, std::uint64_t(j));
    record.upper_seconds = seconds_since(upper_start);
    const Candidate& top = candidates.front();
    record.G_max = top.G;
    record.measure = top.measure;
    record.scenario = top.scenario;
    record.argmax = ocp::describe(problem, top.where);
    record.gamma = decision.gamma;

    if (top.measure <= config.tol_G) {
      record.scenario_count = result.scenarios.size();
      record.epsilon = result.scenarios.epsilon();
      result.history.push_back(record);
      if (on_iteration) on_iteration(record);
      result.status = RunStatus::success;
      result.decision = decision;
      return result;
    }

    auto accept = [&]() {
      int accepted = 0;
      for (const auto& c : candidates) {
        if (accepted >= config.scenarios_per_iteration || c.measure <= config.tol_G) break;
        if (result.scenarios.add(c.scenario)) ++accepted;
      }
      return accepted;
    };
    record.accepted = accept();
    if (record.accepted == 0 && !epsilon_halved) {
      epsilon_halved = true;
      result.scenarios.set_epsilon(0.5 * result.scenarios.epsilon());
      record.accepted = accept();
    }
    record.scenario_count = result.scenarios.size();
    record.epsilon = result.scenarios.epsilon();
    if (record.accepted == 0) {
      result.history.push_back(record);
      if (on_iteration) on_iteration(record);
      result.status = RunStatus::stalled;
      result.decision = decision;
      return result;
    }

    const auto lower_start = Clock::now();
    const LowerLevelResult lower = solve_lower(problem, result.scenarios, decision, config);
    record.lower_seconds = seconds_since(lower_start);
    record.lower_status = lower.status;
    record.lower_max_G = lower.max_G;
    record.gamma_decreased =
        lower.decision.gamma < decision.gamma - config.tol_G * cost_scale(decision.gamma);
    record.gamma = lower.decision.gamma;
    decision = lower.decision;

    result.history.push_back(record);
    if (on_iteration) on_iteration(record);
  }
  result.status = RunStatus::max_iterations;
  result.decision = decision;
  return result;
}

}  // namespace rlr::reduction
