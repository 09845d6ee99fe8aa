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


#ifndef VVFLOW_CORE_FLOWFIELD_HPP_
#define VVFLOW_CORE_FLOWFIELD_HPP_

#include <cstddef>
#include <vector>

#include "lbm.hpp"
#include "raster.hpp"
#include "scene.hpp"

namespace vvflow
{

/// Physical velocity per grid cell, m/s, laid out like the boundary grid.
struct VelocityField
{
  GridSpec spec;
  GridPlacement placement;
  Grid2D<double> vx;
  Grid2D<double> vy;

  VelocityField() = default;
  VelocityField(const GridSpec & spec_, const GridPlacement & placement_);
};

VelocityField to_physical(
  const lbm::LatticeState & state, const lbm::UnitScale & scale, const GridSpec & spec,
  const GridPlacement & placement);

/// Bilinear interpolation between cell centres. Inside the outer half cell
/// the nearest edge values are used; outside the grid extent throws OutOfField.
Vec2 sample_velocity(const VelocityField & field, Vec2 pos);

/// Fixed-step RK4 through a frozen field. Returns the positions after
/// 1*dt ... steps*dt. Once a stage leaves the field, the path continues in a
/// straight line at the last sampled velocity and the result is flagged.
Trajectory integrate_streamline(const VelocityField & field, Vec2 start, double dt, std::size_t steps);

struct StreamlineOptions
{
  std::size_t steps{25};
  double dt{kFrameStep};
  // Start points relative to the target centre; empty means the centre only.
  std::vector<Vec2> start_offsets;
};

/// Streamlines from the target of the last frame over the last field. Fields
/// must be in the target-centred frame, as produced by solve_sequence.
/// One trajectory per start offset.
std::vector<Trajectory> predict_streamlines(
  const SceneSequence & sequence, const std::vector<VelocityField> & fields,
  const StreamlineOptions & options = {});

/// Single streamline from the target centre.
Trajectory predict_streamline(
  const SceneSequence & sequence, const std::vector<VelocityField> & fields,
  std::size_t steps = 25);

}  // namespace vvflow

#endif  // VVFLOW_CORE_FLOWFIELD_HPP_
