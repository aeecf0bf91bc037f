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

// Command-line front end: solve, validate, worst-case and list-presets.

#include "rlr/io/config.hpp"
#include "rlr/io/presets.hpp"
#include "rlr/io/serialization.hpp"
#include "rlr/reduction/local_reduction.hpp"
#include "rlr/validation/validation.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace rlr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotRobust = 2;

struct Options {
  std::string config_file;
  std::string preset;
  std::string model;
  std::string scale;
  std::optional<double> epsilon;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> multistarts;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::string mode;
  std::string decision_file;
  bool nominal = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o)
{
  auto* config = cmd->add_option("--config", o.config_file, "JSON run configuration")->check(CLI::ExistingFile);
  auto* preset = cmd->add_option("--preset", o.preset, "built-in configuration (see list-presets)");
  auto* model = cmd->add_option("--model", o.model, "building | compressor | example1 (uses its preset)");
  config->excludes(preset)->excludes(model);
  preset->excludes(model);
  cmd->add_option("--scale", o.scale, "paper | desk (with --model; default desk)");
  cmd->add_option("--epsilon", o.epsilon, "scenario similarity threshold");
  cmd->add_option("--tol", o.tol, "tolerance on the worst-case measure");
  cmd->add_option("--max-iter", o.max_iter, "iteration cap of the local reduction");
  cmd->add_option("--multistarts", o.multistarts, "upper-level start points per iteration");
  cmd->add_option("--samples", o.samples, "validation sample count");
  cmd->add_option("--seed", o.seed, "seed for multistarts and validation sampling");
  cmd->add_option("--threads", o.threads, "worker cap (0 = hardware concurrency)");
  cmd->add_option("--mode", o.mode, "upper-level split: per_component | per_row");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--quiet", o.quiet, "no progress output");
}

io::RunConfig resolve_config(const Options& o)
{
  io::RunConfig config;
  if (!o.config_file.empty()) {
    config = io::load_config(o.config_file);
  } else if (!o.preset.empty()) {
    config = io::preset_config(o.preset);
  } else {
    const std::string model = o.model.empty() ? "example1" : o.model;
    if (model == "external") throw PreconditionError("--model external needs --config");
    const auto scale = o.scale.empty() ? models::Scale::desk : models::parse_scale(o.scale);
    config = io::preset_config(io::preset_for(model, scale));
  }
  if (!o.scale.empty() && o.model.empty()) {
    throw PreconditionError("--scale only applies together with --model");
  }

  auto& lr = config.local_reduction;
  if (o.epsilon) lr.epsilon = *o.epsilon;
  if (o.tol) lr.tol_G = *o.tol;
  if (o.max_iter) lr.max_iterations = *o.max_iter;
  if (o.multistarts) lr.multistarts = *o.multistarts;
  if (o.samples) {
    if (*o.samples == 0) throw PreconditionError("--samples must be at least 1");
    config.validation_samples = *o.samples;
  }
  if (o.seed) {
    lr.seed = *o.seed;
    config.validation_seed = *o.seed;
  }
  if (o.threads) {
    config.threads = *o.threads;
    lr.threads = *o.threads;
  }
  if (!o.mode.empty()) lr.mode = reduction::parse_upper_level_mode(o.mode);
  if (o.out) config.output_dir = *o.out;
  lr.validate();
  return config;
}

fs::path prepare_output(const io::RunConfig& config)
{
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  // Fail early on unwritable directories rather than after a long run.
  const fs::path probe = dir / ".rlr_write_test";
  {
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe);
  return dir;
}

std::ofstream open_output(const fs::path& path)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string format(double v)
{
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

ocp::DecisionVectord load_decision(const Options& o, const io::RunConfig& config,
                                   const ocp::ProblemDefinition& problem)
{
  fs::path file = o.decision_file;
  if (file.empty()) file = fs::path(config.output_dir) / "decision.json";
  if (!fs::exists(file)) throw PreconditionError("decision file " + file.string() + " does not exist");
  try {
    return io::decision_from_json(io::read_json_file(file.string()), problem);
  } catch (const PreconditionError& e) {
    throw PreconditionError(file.string() + ": " + e.what());
  }
}

int cmd_solve(const Options& o)
{
  const io::RunConfig config = resolve_config(o);
  const ocp::ProblemDefinition problem = io::build_problem(config);
  const fs::path dir = prepare_output(config);
  io::write_json_file((dir / "config.json").string(), io::to_json(config));

  const auto& lr = config.local_reduction;
  const auto start = std::chrono::steady_clock::now();
  reduction::ScenarioSet initial = reduction::nominal_set(problem, lr.epsilon);

  reduction::RunResult result;
  if (o.nominal) {
    // Nominal design: the lower level on the nominal scenario alone, no worst-case search.
    result.scenarios = initial;
    const auto lower = reduction::solve_lower(problem, initial, problem.initial_decision, lr);
    result.decision = lower.decision;
    result.initial_decision = lower.decision;
    result.status = reduction::RunStatus::success;
  } else {
    auto progress = [&](const reduction::IterationRecord& r) {
      if (o.quiet) return;
      std::cout << "iter " << r.iteration << "  G_max " << format(r.G_max) << "  measure "
                << format(r.measure) << " (" << r.argmax << ")  scenarios " << r.scenario_count
                << "  gamma " << format(r.gamma) << "  lower " << nlp::to_string(r.lower_status)
                << std::endl;
    };
    result = reduction::run(problem, lr, initial, std::nullopt, progress);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  io::write_json_file((dir / "decision.json").string(), io::decision_to_json(problem, result.decision));
  io::write_json_file((dir / "scenarios.json").string(), io::scenarios_to_json(problem, result.scenarios));
  {
    auto out = open_output(dir / "history.csv");
    io::write_history_csv(out, result.history);
  }
  {
    // Plot-ready closed-loop trajectory on the nominal scenario.
    const auto rollout = ocp::rollout(problem, result.decision, problem.bounds.center());
    auto out = open_output(dir / "nominal_trajectory.csv");
    out << "k";
    for (Index i = 0; i < problem.dims.n_x; ++i) out << ",x" << i;
    for (Index i = 0; i < problem.dims.n_u; ++i) out << ",u" << i;
    out << '\n' << std::setprecision(17);
    for (Index k = 0; k <= problem.dims.horizon; ++k) {
      out << k;
      for (Index i = 0; i < problem.dims.n_x; ++i) out << ',' << rollout.x(k, i);
      for (Index i = 0; i < problem.dims.n_u; ++i) {
        out << ',';
        if (k < problem.dims.horizon) out << rollout.u(k, i);
      }
      out << '\n';
    }
  }

  const double final_G = result.history.empty() ? 0.0 : result.history.back().G_max;
  nlohmann::json summary = {{"problem", problem.name},
                            {"status", reduction::to_string(result.status)},
                            {"iterations", result.history.size()},
                            {"scenario_count", result.scenarios.size()},
                            {"epsilon", result.scenarios.epsilon()},
                            {"gamma", result.decision.gamma},
                            {"nominal_only", o.nominal},
                            {"seconds", seconds}};
  if (!result.history.empty()) {
    summary["final_G_max"] = final_G;
    summary["final_measure"] = result.history.back().measure;
  }
  io::write_json_file((dir / "summary.json").string(), summary);

  std::cout << "status " << reduction::to_string(result.status) << "  scenarios "
            << result.scenarios.size() << "  gamma " << format(result.decision.gamma) << "  time "
            << format(seconds) << " s\n"
            << "wrote " << dir.string() << '\n';
  return result.status == reduction::RunStatus::success ? kExitOk : kExitNotRobust;
}

int cmd_validate(const Options& o)
{
  const io::RunConfig config = resolve_config(o);
  const ocp::ProblemDefinition problem = io::build_problem(config);
  const ocp::DecisionVectord decision = load_decision(o, config, problem);
  const fs::path dir = prepare_output(config);

  const auto report = validation::validate(problem, decision, config.validation_samples,
                                           config.validation_seed, config.threads);
  {
    auto out = open_output(dir / "validation.csv");
    validation::write_csv(out, problem, report);
  }
  {
    // Trajectories of the worst sample and the first few others, for plotting.
    std::vector<std::size_t> indices{report.worst_index};
    for (std::size_t i = 0; i < std::min<std::size_t>(report.samples, 20); ++i) {
      if (i != report.worst_index) indices.push_back(i);
    }
    auto out = open_output(dir / "validation_trajectories.csv");
    validation::write_trajectories_csv(out, problem, decision, report, indices);
  }

  const double tol = config.local_reduction.tol_G;
  const bool ok = report.max_violation <= tol;
  std::cout << "samples " << report.samples << "  max violation " << format(report.max_violation)
            << "  violation rate " << format(report.constraint_violation_rate) << "  max G "
            << format(report.max_G) << "  diverged " << report.diverged << '\n'
            << (ok ? "no constraint violation beyond " : "constraint violation beyond ") << format(tol)
            << '\n';
  return ok ? kExitOk : kExitNotRobust;
}

int cmd_worst_case(const Options& o)
{
  const io::RunConfig config = resolve_config(o);
  const ocp::ProblemDefinition problem = io::build_problem(config);
  const ocp::DecisionVectord decision =
      o.decision_file.empty() && !fs::exists(fs::path(config.output_dir) / "decision.json")
          ? problem.initial_decision
          : load_decision(o, config, problem);
  const fs::path dir = prepare_output(config);

  const auto candidates = reduction::find_worst_case(problem, decision, config.local_reduction);
  {
    auto out = open_output(dir / "candidates.csv");
    io::write_candidates_csv(out, problem, candidates);
  }
  const auto& top = candidates.front();
  io::write_json_file((dir / "worst_case.json").string(),
                      {{"G", top.G},
                       {"measure", top.measure},
                       {"argmax", ocp::describe(problem, top.where)},
                       {"scenario", io::scenario_to_json(top.scenario)}});

  const bool ok = top.measure <= config.local_reduction.tol_G;
  std::cout << "candidates " << candidates.size() << "  top G " << format(top.G) << "  measure "
            << format(top.measure) << " (" << ocp::describe(problem, top.where) << ")\n";
  if (problem.dims.n_d <= 16) {
    std::cout << "top d";
    for (Index i = 0; i < top.scenario.d.size(); ++i) std::cout << ' ' << format(top.scenario.d(i));
    std::cout << '\n';
  }
  return ok ? kExitOk : kExitNotRobust;
}

int cmd_list_presets()
{
  for (const auto& name : io::preset_names()) {
    const auto config = io::preset_config(name);
    std::cout << std::left << std::setw(18) << name << config.description << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Robust optimal control by local reduction"};
  app.require_subcommand(1);

  Options o;
  auto* solve = app.add_subcommand("solve", "run the local reduction and write decision, scenarios and history");
  add_common(solve, o);
  solve->add_flag("--nominal", o.nominal, "optimise for the nominal scenario only");

  auto* validate = app.add_subcommand("validate", "Monte Carlo check of a decision");
  add_common(validate, o);
  validate->add_option("--decision", o.decision_file, "decision file (default <out>/decision.json)");

  auto* worst = app.add_subcommand("worst-case", "one worst-case search at a fixed decision");
  add_common(worst, o);
  worst->add_option("--decision", o.decision_file,
                    "decision file (default <out>/decision.json, else the model's initial decision)");

  app.add_subcommand("list-presets", "print the built-in configurations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (validate->parsed()) return cmd_validate(o);
    if (worst->parsed()) return cmd_worst_case(o);
    return cmd_list_presets();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
