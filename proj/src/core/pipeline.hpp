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


#ifndef VVFLOW_CORE_PIPELINE_HPP_
#define VVFLOW_CORE_PIPELINE_HPP_

#include <vector>

#include "flowfield.hpp"
#include "lbm.hpp"
#include "raster.hpp"
#include "scene.hpp"
#include "vvf_io.hpp"

namespace vvflow
{

struct GenerateOptions
{
  GridSpec spec;
  lbm::SolverParams solver;
  double beta{kDefaultPorousBeta};
};

struct FrameSolution
{
  OccupancyGrid occupancy;
  VelocityField field;
  int iterations{0};
  bool converged{false};
  double last_delta{0.0};
};

/// Rasterizes and solves every observed frame in the target-centred,
/// direction-normalised frame. One velocity scale covers the whole sequence
/// so that a frame can warm-start from its predecessor.
std::vector<FrameSolution> solve_sequence(const SceneSequence & sequence, const GenerateOptions & options = {});

/// Occupancy and velocity channels of every frame as a .vvf volume.
VvfVolume to_volume(const std::vector<FrameSolution> & frames);

}  // namespace vvflow

#endif  // VVFLOW_CORE_PIPELINE_HPP_
