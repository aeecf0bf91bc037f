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

#ifndef RLR_MODELS_SCALE_HPP
#define RLR_MODELS_SCALE_HPP

#include <string>

namespace rlr::models {

/// Problem size: the full reference horizon, or a reduced one that runs in minutes on a laptop.
enum class Scale { paper, desk };

std::string to_string(Scale scale);

/// Accepts "paper" or "desk"; throws PreconditionError otherwise.
Scale parse_scale(const std::string& text);

}  // namespace rlr::models

#endif  // RLR_MODELS_SCALE_HPP
