// Copyright 2026 The vvflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef VVFLOW_CORE_SCENARIO_HPP_
#define VVFLOW_CORE_SCENARIO_HPP_

#include <filesystem>
#include <iosfwd>

#include "scene.hpp"

namespace vvflow
{

/// Reads a synthetic scenario: `[road]` and `[vehicle]` blocks of
/// `key = value` lines, '#' comments. With `frames = h` the observed window is
/// filled backwards at constant velocity; `horizon = p` adds a
/// constant-velocity future for the target. Throws Format with a line number.
SceneSequence parse_scenario(std::istream & is);
SceneSequence load_scenario(const std::filesystem::path & path);

}  // namespace vvflow

#endif  // VVFLOW_CORE_SCENARIO_HPP_
