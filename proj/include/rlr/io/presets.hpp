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

#ifndef RLR_IO_PRESETS_HPP
#define RLR_IO_PRESETS_HPP

#include "rlr/io/config.hpp"

#include <string>
#include <vector>

namespace rlr::io {

std::vector<std::string> preset_names();

/// Raw JSON text of a built-in preset; throws PreconditionError for unknown names.
const std::string& preset_text(const std::string& name);

RunConfig preset_config(const std::string& name);

/// Preset name for a model and scale: example1 has a single preset, the others are
/// "<model>_<scale>".
std::string preset_for(const std::string& model, models::Scale scale);

}  // namespace rlr::io

#endif  // RLR_IO_PRESETS_HPP
