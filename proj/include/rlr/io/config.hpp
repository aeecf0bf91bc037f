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

#ifndef RLR_IO_CONFIG_HPP
#define RLR_IO_CONFIG_HPP

#include "rlr/models/scale.hpp"
#include "rlr/ocp/problem.hpp"
#include "rlr/reduction/local_reduction.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace rlr::io {

/// Invalid configuration; the message names the source, line and field path.
class ConfigError : public PreconditionError {
 public:
  ConfigError(const std::string& source, int line, const std::string& field,
              const std::string& message);

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

inline constexpr int kSchemaVersion = 1;

/// Everything a CLI run needs; mirrors the JSON configuration file.
struct RunConfig {
  std::string description;
  /// building | compressor | example1 | external
  std::string model = "example1";
  models::Scale scale = models::Scale::desk;
  /// Model parameter overrides, keyed by parameter name.
  nlohmann::json parameters = nlohmann::json::object();
  /// JSON model definition, for model = external (relative paths resolve against the config).
  std::string definition_file;
  reduction::LocalReductionConfig local_reduction;
  std::size_t validation_samples = 1000;
  std::uint64_t validation_seed = 1;
  int threads = 1;
  std::string output_dir = "rlr_out";
  /// Directory of the file the config was read from (empty for presets and strings).
  std::string base_dir;
};

/// Parses and validates a configuration document. `source` labels error messages.
RunConfig parse_config(const std::string& text, const std::string& source);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);

/// Builds the problem selected by the configuration, applying parameter overrides.
ocp::ProblemDefinition build_problem(const RunConfig& config);

/// Linear model definition (see models::LinearModelSpec) from its JSON document.
ocp::ProblemDefinition parse_linear_model(const std::string& text, const std::string& source);

}  // namespace rlr::io

#endif  // RLR_IO_CONFIG_HPP
