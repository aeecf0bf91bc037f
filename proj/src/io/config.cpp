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

#include "rlr/io/config.hpp"

#include "rlr/io/serialization.hpp"
#include "rlr/models/building.hpp"
#include "rlr/models/compressor.hpp"
#include "rlr/models/example1.hpp"
#include "rlr/models/linear.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <variant>

namespace rlr::io {

using nlohmann::json;

namespace {

std::string location(const std::string& source, int line)
{
  return line > 0 ? source + ":" + std::to_string(line) : source;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& field,
                         const std::string& message)
    : PreconditionError(location(source, line) + ": " + (field.empty() ? "" : field + ": ") + message),
      field_(field),
      line_(line)
{
}

namespace {

using PathPart = std::variant<std::string, std::size_t>;

/// Field access with error messages carrying the dotted path and the source line.
class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::vector<PathPart>& path, const std::string& message) const
  {
    throw ConfigError(source_, line_of(path), dotted(path), message);
  }

  static std::string dotted(const std::vector<PathPart>& path)
  {
    std::string out;
    for (const auto& part : path) {
      if (const auto* key = std::get_if<std::string>(&part)) {
        if (!out.empty()) out += '.';
        out += *key;
      } else {
        out += '[' + std::to_string(std::get<std::size_t>(part)) + ']';
      }
    }
    return out;
  }

  // Line of the last key on the path, found by scanning for each key in turn.
  int line_of(const std::vector<PathPart>& path) const
  {
    if (text_.empty()) return 0;
    std::size_t pos = 0;
    for (const auto& part : path) {
      if (const auto* key = std::get_if<std::string>(&part)) {
        const std::size_t found = text_.find('"' + *key + '"', pos);
        if (found == std::string::npos) break;
        pos = found;
      }
    }
    return 1 + int(std::count(text_.begin(), text_.begin() + std::ptrdiff_t(pos), '\n'));
  }

  void expect_object(const json& j, const std::vector<PathPart>& path,
                     std::initializer_list<const char*> allowed) const
  {
    if (!j.is_object()) fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const char* name : allowed) known = known || it.key() == name;
      if (!known) fail(with(path, it.key()), "unknown field");
    }
  }

  static std::vector<PathPart> with(std::vector<PathPart> path, PathPart part)
  {
    path.push_back(std::move(part));
    return path;
  }

  double number(const json& j, const std::vector<PathPart>& path) const
  {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }

  std::int64_t integer(const json& j, const std::vector<PathPart>& path) const
  {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<std::int64_t>();
  }

  bool boolean(const json& j, const std::vector<PathPart>& path) const
  {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
  }

  std::string string(const json& j, const std::vector<PathPart>& path) const
  {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  /// Bounds may use null for an infinite entry, taking the value `missing`.
  Eigen::VectorXd vector(const json& j, const std::vector<PathPart>& path,
                         double missing = std::numeric_limits<double>::quiet_NaN()) const
  {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (j[i].is_null() && !std::isnan(missing)) {
        v(Index(i)) = missing;
      } else {
        v(Index(i)) = number(j[i], with(path, i));
      }
    }
    return v;
  }

  /// Matrices are arrays of rows.
  Eigen::MatrixXd matrix(const json& j, const std::vector<PathPart>& path) const
  {
    if (!j.is_array()) fail(path, "expected an array of rows");
    if (j.empty()) return Eigen::MatrixXd(0, 0);
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Eigen::MatrixXd m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto row_path = with(path, i);
      if (!j[i].is_array()) fail(row_path, "expected a row array");
      if (j[i].size() != cols) {
        fail(row_path, "row has " + std::to_string(j[i].size()) + " entries, expected " +
                           std::to_string(cols));
      }
      for (std::size_t c = 0; c < cols; ++c) m(Index(i), Index(c)) = number(j[i][c], with(row_path, c));
    }
    return m;
  }

  template <typename Fixed>
  Fixed fixed(const json& j, const std::vector<PathPart>& path) const
  {
    Eigen::MatrixXd m;
    if (Fixed::ColsAtCompileTime == 1) {
      m = vector(j, path);
    } else {
      m = matrix(j, path);
    }
    if (m.rows() != Fixed::RowsAtCompileTime || m.cols() != Fixed::ColsAtCompileTime) {
      fail(path, "expected shape " + std::to_string(Fixed::RowsAtCompileTime) + "x" +
                     std::to_string(Fixed::ColsAtCompileTime) + ", got " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()));
    }
    return m;
  }

  const std::string& source() const { return source_; }

 private:
  const std::string& text_;
  std::string source_;
};

using Path = std::vector<PathPart>;

// Parameter overrides: a table from name to a setter on the parameter struct.
template <typename Params>
using Setter = std::function<void(Params&, const Reader&, const json&, const Path&)>;

template <typename Params>
Setter<Params> set_double(double Params::*field)
{
  return [field](Params& p, const Reader& r, const json& j, const Path& path) {
    p.*field = r.number(j, path);
  };
}

template <typename Params, typename Fixed>
Setter<Params> set_fixed(Fixed Params::*field)
{
  return [field](Params& p, const Reader& r, const json& j, const Path& path) {
    p.*field = r.fixed<Fixed>(j, path);
  };
}

template <typename Params>
Setter<Params> set_saturation_form(models::SaturationForm Params::*field)
{
  return [field](Params& p, const Reader& r, const json& j, const Path& path) {
    const std::string form = r.string(j, path);
    if (form == "offset") {
      p.*field = models::SaturationForm::offset;
    } else if (form == "printed") {
      p.*field = models::SaturationForm::printed;
    } else {
      r.fail(path, "unknown saturation form '" + form + "' (expected offset or printed)");
    }
  };
}

template <typename Params>
void apply_overrides(Params& params, const std::map<std::string, Setter<Params>>& table,
                     const Reader& reader, const json& overrides, const Path& path)
{
  if (!overrides.is_object()) reader.fail(path, "expected an object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    const auto entry = table.find(it.key());
    const Path field = Reader::with(path, it.key());
    if (entry == table.end()) reader.fail(field, "unknown parameter for this model");
    entry->second(params, reader, it.value(), field);
  }
}

const std::map<std::string, Setter<models::BuildingParameters>>& building_setters()
{
  using P = models::BuildingParameters;
  static const std::map<std::string, Setter<P>> table = {
      {"horizon",
       [](P& p, const Reader& r, const json& j, const Path& path) {
         const auto n = r.integer(j, path);
         if (n < 1) r.fail(path, "horizon must be at least 1");
         p.horizon = int(n);
       }},
      {"A", set_fixed(&P::A)},
      {"B", set_fixed(&P::B)},
      {"W", set_fixed(&P::W)},
      {"x0", set_fixed(&P::x0)},
      {"multiplier_spread", set_double(&P::multiplier_spread)},
      {"initial_offset", set_double(&P::initial_offset)},
      {"t_min_day", set_double(&P::t_min_day)},
      {"t_min_night", set_double(&P::t_min_night)},
      {"t_max", set_double(&P::t_max)},
      {"start_hour", set_double(&P::start_hour)},
      {"day_start_hour", set_double(&P::day_start_hour)},
      {"day_hours", set_double(&P::day_hours)},
      {"horizon_hours", set_double(&P::horizon_hours)},
      {"w_day_lower", set_fixed(&P::w_day_lower)},
      {"w_day_upper", set_fixed(&P::w_day_upper)},
      {"w_night_lower", set_fixed(&P::w_night_lower)},
      {"w_night_upper", set_fixed(&P::w_night_upper)},
      {"input_lower", set_double(&P::input_lower)},
      {"input_upper", set_double(&P::input_upper)},
      {"saturation_beta", set_fixed(&P::saturation_beta)},
      {"saturation_form", set_saturation_form(&P::saturation_form)},
      {"gain_lower", set_double(&P::gain_lower)},
      {"gain_upper", set_double(&P::gain_upper)},
      {"offset_bound", set_double(&P::offset_bound)},
  };
  return table;
}

const std::map<std::string, Setter<models::CompressorParameters>>& compressor_setters()
{
  using P = models::CompressorParameters;
  static const std::map<std::string, Setter<P>> table = {
      {"alpha", set_fixed(&P::alpha)},
      {"mass_flow_target", set_double(&P::mass_flow_target)},
      {"weight_recycle", set_double(&P::weight_recycle)},
      {"weight_speed", set_double(&P::weight_speed)},
      {"weight_tracking", set_double(&P::weight_tracking)},
      {"final_time", set_double(&P::final_time)},
      {"step", set_double(&P::step)},
      {"mass_flow_min", set_double(&P::mass_flow_min)},
      {"mass_flow_max", set_double(&P::mass_flow_max)},
      {"speed_min", set_double(&P::speed_min)},
      {"speed_max", set_double(&P::speed_max)},
      {"torque_lower", set_double(&P::torque_lower)},
      {"torque_upper", set_double(&P::torque_upper)},
      {"torque_beta", set_fixed(&P::torque_beta)},
      {"recycle_lower", set_double(&P::recycle_lower)},
      {"recycle_upper", set_double(&P::recycle_upper)},
      {"recycle_beta", set_fixed(&P::recycle_beta)},
      {"saturation_form", set_saturation_form(&P::saturation_form)},
      {"valve_spread", set_double(&P::valve_spread)},
      {"map_spread", set_double(&P::map_spread)},
      {"sound_speed", set_double(&P::sound_speed)},
      {"suction_volume", set_double(&P::suction_volume)},
      {"discharge_volume", set_double(&P::discharge_volume)},
      {"duct_area", set_double(&P::duct_area)},
      {"duct_length", set_double(&P::duct_length)},
      {"pascal_per_bar", set_double(&P::pascal_per_bar)},
      {"inertia", set_double(&P::inertia)},
      {"recycle_time_constant", set_double(&P::recycle_time_constant)},
      {"reaction_torque_coefficient", set_double(&P::reaction_torque_coefficient)},
      {"inlet_pressure", set_double(&P::inlet_pressure)},
      {"outlet_pressure", set_double(&P::outlet_pressure)},
      {"inlet_valve", set_double(&P::inlet_valve)},
      {"outlet_valve", set_double(&P::outlet_valve)},
      {"recycle_valve", set_double(&P::recycle_valve)},
      {"recycle_setpoint", set_double(&P::recycle_setpoint)},
      {"recycle_kp", set_double(&P::recycle_kp)},
      {"recycle_ki", set_double(&P::recycle_ki)},
      {"sqrt_smoothing", set_double(&P::sqrt_smoothing)},
      {"initial_mass_flow", set_double(&P::initial_mass_flow)},
      {"initial_integral", set_double(&P::initial_integral)},
      {"gain_lower", set_fixed(&P::gain_lower)},
      {"gain_upper", set_fixed(&P::gain_upper)},
      {"initial_gains", set_fixed(&P::initial_gains)},
  };
  return table;
}

const std::map<std::string, Setter<models::Example1Model>>& example1_setters()
{
  using P = models::Example1Model;
  static const std::map<std::string, Setter<P>> table = {
      {"a", set_double(&P::a)},
      {"b", set_double(&P::b)},
      {"u_fixed",
       [](P& p, const Reader& r, const json& j, const Path& path) {
         p.u_fixed = r.vector(j, path);
         if (p.u_fixed.size() == 0) r.fail(path, "u_fixed must not be empty");
       }},
  };
  return table;
}

const Path kParameters{std::string("model"), std::string("parameters")};

ocp::ProblemDefinition build_named(const std::string& model, models::Scale scale,
                                   const json& overrides, const Reader& reader)
{
  if (model == "building") {
    auto params = models::building_parameters(scale);
    apply_overrides(params, building_setters(), reader, overrides, kParameters);
    return models::building_problem(params);
  }
  if (model == "compressor") {
    auto params = models::compressor_parameters(scale);
    apply_overrides(params, compressor_setters(), reader, overrides, kParameters);
    return models::compressor_problem(params);
  }
  models::Example1Model params;
  apply_overrides(params, example1_setters(), reader, overrides, kParameters);
  return models::example1_problem(params);
}

std::string read_text(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json(const std::string& text, const std::string& source)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + int(std::count(text.begin(), text.begin() + std::ptrdiff_t(byte), '\n'));
    std::string message = e.what();
    // Drop the library's "[json.exception.parse_error.101] " prefix.
    const auto bracket = message.find("] ");
    if (bracket != std::string::npos) message = message.substr(bracket + 2);
    throw ConfigError(source, line, "", message);
  }
}

std::string resolve(const std::string& base_dir, const std::string& file)
{
  const std::filesystem::path p(file);
  if (p.is_absolute() || base_dir.empty()) return file;
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source)
{
  const Reader reader(text, source);
  const json doc = parse_json(text, source);
  reader.expect_object(doc, {},
                       {"schema_version", "description", "model", "local_reduction", "validation",
                        "threads", "output_dir"});
  if (!doc.contains("schema_version")) reader.fail({std::string("schema_version")}, "missing field");
  const auto version = reader.integer(doc["schema_version"], {std::string("schema_version")});
  if (version != kSchemaVersion) {
    reader.fail({std::string("schema_version")},
                "unsupported version " + std::to_string(version) + " (expected " +
                    std::to_string(kSchemaVersion) + ")");
  }

  RunConfig config;
  if (doc.contains("description")) config.description = reader.string(doc["description"], {std::string("description")});

  if (doc.contains("model")) {
    const Path mp{std::string("model")};
    const json& m = doc["model"];
    reader.expect_object(m, mp, {"name", "scale", "parameters", "definition_file"});
    if (m.contains("name")) {
      config.model = reader.string(m["name"], Reader::with(mp, std::string("name")));
      if (config.model != "building" && config.model != "compressor" && config.model != "example1" &&
          config.model != "external") {
        reader.fail(Reader::with(mp, std::string("name")),
                    "unknown model '" + config.model +
                        "' (expected building, compressor, example1 or external)");
      }
    }
    if (m.contains("scale")) {
      const Path sp = Reader::with(mp, std::string("scale"));
      try {
        config.scale = models::parse_scale(reader.string(m["scale"], sp));
      } catch (const ConfigError&) {
        throw;
      } catch (const PreconditionError& e) {
        reader.fail(sp, e.what());
      }
    }
    if (m.contains("parameters")) config.parameters = m["parameters"];
    if (m.contains("definition_file")) {
      config.definition_file =
          reader.string(m["definition_file"], Reader::with(mp, std::string("definition_file")));
    }
    if (config.model == "external" && config.definition_file.empty()) {
      reader.fail(Reader::with(mp, std::string("definition_file")), "required for the external model");
    }
    if (config.model == "external" && !config.parameters.empty()) {
      reader.fail(kParameters, "the external model takes its parameters from the definition file");
    }
  }

  if (doc.contains("local_reduction")) {
    const Path lp{std::string("local_reduction")};
    const json& l = doc["local_reduction"];
    reader.expect_object(l, lp,
                         {"epsilon", "tol_G", "max_iterations", "multistarts",
                          "scenarios_per_iteration", "seed", "presolve_initial_set", "mode",
                          "upper_tolerance", "upper_max_iterations", "lower"});
    auto& c = config.local_reduction;
    auto at = [&](const char* key) { return Reader::with(lp, std::string(key)); };
    if (l.contains("epsilon")) c.epsilon = reader.number(l["epsilon"], at("epsilon"));
    if (l.contains("tol_G")) c.tol_G = reader.number(l["tol_G"], at("tol_G"));
    if (l.contains("max_iterations")) c.max_iterations = int(reader.integer(l["max_iterations"], at("max_iterations")));
    if (l.contains("multistarts")) c.multistarts = int(reader.integer(l["multistarts"], at("multistarts")));
    if (l.contains("scenarios_per_iteration")) {
      c.scenarios_per_iteration = int(reader.integer(l["scenarios_per_iteration"], at("scenarios_per_iteration")));
    }
    if (l.contains("seed")) {
      const auto seed = reader.integer(l["seed"], at("seed"));
      if (seed < 0) reader.fail(at("seed"), "must be non-negative");
      c.seed = std::uint64_t(seed);
    }
    if (l.contains("presolve_initial_set")) {
      c.presolve_initial_set = reader.boolean(l["presolve_initial_set"], at("presolve_initial_set"));
    }
    if (l.contains("mode")) {
      try {
        c.mode = reduction::parse_upper_level_mode(reader.string(l["mode"], at("mode")));
      } catch (const ConfigError&) {
        throw;
      } catch (const PreconditionError& e) {
        reader.fail(at("mode"), e.what());
      }
    }
    if (l.contains("upper_tolerance")) c.upper_tolerance = reader.number(l["upper_tolerance"], at("upper_tolerance"));
    if (l.contains("upper_max_iterations")) {
      c.upper_max_iterations = int(reader.integer(l["upper_max_iterations"], at("upper_max_iterations")));
    }
    if (l.contains("lower")) {
      const Path lo = at("lower");
      const json& lj = l["lower"];
      reader.expect_object(lj, lo, {"tolerance", "max_outer_iterations", "max_inner_iterations"});
      auto& o = c.lower_options;
      if (lj.contains("tolerance")) {
        o.tolerance = reader.number(lj["tolerance"], Reader::with(lo, std::string("tolerance")));
        if (!(o.tolerance > 0.0)) reader.fail(Reader::with(lo, std::string("tolerance")), "must be positive");
      }
      if (lj.contains("max_outer_iterations")) {
        const Path fp = Reader::with(lo, std::string("max_outer_iterations"));
        o.max_outer_iterations = int(reader.integer(lj["max_outer_iterations"], fp));
        if (o.max_outer_iterations < 1) reader.fail(fp, "must be at least 1");
      }
      if (lj.contains("max_inner_iterations")) {
        const Path fp = Reader::with(lo, std::string("max_inner_iterations"));
        o.max_inner_iterations = int(reader.integer(lj["max_inner_iterations"], fp));
        if (o.max_inner_iterations < 1) reader.fail(fp, "must be at least 1");
      }
    }
  }

  if (doc.contains("validation")) {
    const Path vp{std::string("validation")};
    const json& v = doc["validation"];
    reader.expect_object(v, vp, {"samples", "seed"});
    if (v.contains("samples")) {
      const Path fp = Reader::with(vp, std::string("samples"));
      const auto n = reader.integer(v["samples"], fp);
      if (n < 1) reader.fail(fp, "must be at least 1");
      config.validation_samples = std::size_t(n);
    }
    if (v.contains("seed")) {
      const Path fp = Reader::with(vp, std::string("seed"));
      const auto seed = reader.integer(v["seed"], fp);
      if (seed < 0) reader.fail(fp, "must be non-negative");
      config.validation_seed = std::uint64_t(seed);
    }
  }

  if (doc.contains("threads")) {
    const Path tp{std::string("threads")};
    const auto threads = reader.integer(doc["threads"], tp);
    if (threads < 0) reader.fail(tp, "must be non-negative");
    config.threads = int(threads);
  }
  config.local_reduction.threads = config.threads;
  if (doc.contains("output_dir")) config.output_dir = reader.string(doc["output_dir"], {std::string("output_dir")});

  try {
    config.local_reduction.validate();
  } catch (const PreconditionError& e) {
    // Messages start with the dotted field name.
    const std::string message = e.what();
    const std::string field = message.substr(0, message.find(' '));
    Path path;
    std::stringstream parts(field);
    for (std::string part; std::getline(parts, part, '.');) path.emplace_back(part);
    reader.fail(path, message.substr(message.find(' ') + 1));
  }

  // Surface bad overrides now, with their location.
  if (config.model != "external") build_named(config.model, config.scale, config.parameters, reader);
  return config;
}

RunConfig load_config(const std::string& path)
{
  RunConfig config = parse_config(read_text(path), path);
  config.base_dir = std::filesystem::path(path).parent_path().string();
  return config;
}

json to_json(const RunConfig& config)
{
  const auto& c = config.local_reduction;
  json model = {{"name", config.model}, {"scale", models::to_string(config.scale)}};
  if (!config.parameters.empty()) model["parameters"] = config.parameters;
  if (!config.definition_file.empty()) model["definition_file"] = config.definition_file;
  json doc = {
      {"schema_version", kSchemaVersion},
      {"model", model},
      {"local_reduction",
       {{"epsilon", c.epsilon},
        {"tol_G", c.tol_G},
        {"max_iterations", c.max_iterations},
        {"multistarts", c.multistarts},
        {"scenarios_per_iteration", c.scenarios_per_iteration},
        {"seed", c.seed},
        {"presolve_initial_set", c.presolve_initial_set},
        {"mode", reduction::to_string(c.mode)},
        {"upper_tolerance", c.upper_tolerance},
        {"upper_max_iterations", c.upper_max_iterations},
        {"lower",
         {{"tolerance", c.lower_options.tolerance},
          {"max_outer_iterations", c.lower_options.max_outer_iterations},
          {"max_inner_iterations", c.lower_options.max_inner_iterations}}}}},
      {"validation", {{"samples", config.validation_samples}, {"seed", config.validation_seed}}},
      {"threads", config.threads},
      {"output_dir", config.output_dir},
  };
  if (!config.description.empty()) doc["description"] = config.description;
  return doc;
}

ocp::ProblemDefinition build_problem(const RunConfig& config)
{
  if (config.model == "external") {
    const std::string path = resolve(config.base_dir, config.definition_file);
    return parse_linear_model(read_text(path), path);
  }
  const std::string empty;
  return build_named(config.model, config.scale, config.parameters, Reader(empty, "parameters"));
}

ocp::ProblemDefinition parse_linear_model(const std::string& text, const std::string& source)
{
  const Reader reader(text, source);
  const json doc = parse_json(text, source);
  reader.expect_object(doc, {},
                       {"format", "version", "name", "horizon", "A", "B", "W", "A_d", "B_d", "x0",
                        "w_lower", "w_upper", "d_lower", "d_upper", "Q", "R", "P", "x_lower",
                        "x_upper", "u_lower", "u_upper", "feedback", "offsets", "gain_bound",
                        "offset_bound"});
  auto key = [](const char* k) { return Path{std::string(k)}; };
  for (const char* required : {"horizon", "A", "B", "x0"}) {
    if (!doc.contains(required)) reader.fail(key(required), "missing field");
  }
  if (doc.contains("format") && reader.string(doc["format"], key("format")) != "rlr-linear-model") {
    reader.fail(key("format"), "expected \"rlr-linear-model\"");
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  models::LinearModelSpec spec;
  if (doc.contains("name")) spec.name = reader.string(doc["name"], key("name"));
  const auto horizon = reader.integer(doc["horizon"], key("horizon"));
  if (horizon < 1) reader.fail(key("horizon"), "must be at least 1");
  spec.horizon = int(horizon);
  spec.A = reader.matrix(doc["A"], key("A"));
  spec.B = reader.matrix(doc["B"], key("B"));
  if (doc.contains("W")) spec.W = reader.matrix(doc["W"], key("W"));
  for (const char* list : {"A_d", "B_d"}) {
    if (!doc.contains(list)) continue;
    const json& arr = doc[list];
    if (!arr.is_array()) reader.fail(key(list), "expected an array of matrices");
    auto& target = std::string(list) == "A_d" ? spec.A_d : spec.B_d;
    for (std::size_t i = 0; i < arr.size(); ++i) target.push_back(reader.matrix(arr[i], Reader::with(key(list), i)));
  }
  spec.x0 = reader.vector(doc["x0"], key("x0"));
  if (doc.contains("w_lower")) spec.w_lower = reader.vector(doc["w_lower"], key("w_lower"));
  if (doc.contains("w_upper")) spec.w_upper = reader.vector(doc["w_upper"], key("w_upper"));
  if (doc.contains("d_lower")) spec.d_lower = reader.vector(doc["d_lower"], key("d_lower"));
  if (doc.contains("d_upper")) spec.d_upper = reader.vector(doc["d_upper"], key("d_upper"));
  if (doc.contains("Q")) spec.Q = reader.matrix(doc["Q"], key("Q"));
  if (doc.contains("R")) spec.R = reader.matrix(doc["R"], key("R"));
  if (doc.contains("P")) spec.P = reader.matrix(doc["P"], key("P"));
  if (doc.contains("x_lower")) spec.x_lower = reader.vector(doc["x_lower"], key("x_lower"), -inf);
  if (doc.contains("x_upper")) spec.x_upper = reader.vector(doc["x_upper"], key("x_upper"), inf);
  if (doc.contains("u_lower")) spec.u_lower = reader.vector(doc["u_lower"], key("u_lower"), -inf);
  if (doc.contains("u_upper")) spec.u_upper = reader.vector(doc["u_upper"], key("u_upper"), inf);
  if (doc.contains("feedback")) spec.feedback = reader.boolean(doc["feedback"], key("feedback"));
  if (doc.contains("offsets")) spec.offsets = reader.boolean(doc["offsets"], key("offsets"));
  if (doc.contains("gain_bound")) spec.gain_bound = reader.number(doc["gain_bound"], key("gain_bound"));
  if (doc.contains("offset_bound")) spec.offset_bound = reader.number(doc["offset_bound"], key("offset_bound"));

  try {
    return models::linear_problem(spec);
  } catch (const ConfigError&) {
    throw;
  } catch (const PreconditionError& e) {
    throw ConfigError(source, 0, "", e.what());
  }
}

}  // namespace rlr::io
