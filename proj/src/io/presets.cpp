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

#include "rlr/io/presets.hpp"

#include "rlr/embedded_presets.hpp"

#include <map>

namespace rlr::io {

namespace {

const std::map<std::string, std::string>& presets()
{
  static const std::map<std::string, std::string> table = [] {
    std::map<std::string, std::string> out;
    for (const auto& [name, text] : detail::kEmbeddedPresets) out.emplace(name, text);
    return out;
  }();
  return table;
}

}  // namespace

std::vector<std::string> preset_names()
{
  std::vector<std::string> names;
  for (const auto& entry : presets()) names.push_back(entry.first);
  return names;
}

const std::string& preset_text(const std::string& name)
{
  const auto it = presets().find(name);
  if (it == presets().end()) throw PreconditionError("unknown preset '" + name + "'");
  return it->second;
}

RunConfig preset_config(const std::string& name)
{
  return parse_config(preset_text(name), "preset " + name);
}

std::string preset_for(const std::string& model, models::Scale scale)
{
  if (model == "example1") return model;
  return model + "_" + models::to_string(scale);
}

}  // namespace rlr::io
