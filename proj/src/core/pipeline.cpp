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


#include "pipeline.hpp"

#include <algorithm>
#include <optional>

#include "error.hpp"

namespace vvflow
{

namespace
{

// Previous solution where it holds fluid, nominal flow elsewhere (cells that
// were walls or vehicles in the previous frame).
lbm::LatticeState warm_state(
  const lbm::LatticeState & prev, const BoundaryGrid & grid, const lbm::UnitScale & scale)
{
  lbm::LatticeState s = lbm::initial_state(grid, scale);
  for (std::size_t c = 0; c < s.cells(); ++c) {
    if (grid.cells[c].kind == CellKind::NoSlipWall || !(prev.rho[c] > 0.0)) continue;
    s.set_populations(c, prev.populations(c));
    s.update_moments(c);
  }
  return s;
}

}  // namespace

std::vector<FrameSolution> solve_sequence(const SceneSequence & sequence, const GenerateOptions & options)
{
  sequence.validate();
  if (sequence.frames.empty()) fail(ErrorCode::EmptySet, "sequence has no frames");
  options.solver.validate();

  std::vector<SceneFrame> frames;
  std::vector<BoundaryGrid> grids;
  for (const auto & raw : sequence.frames) {
    frames.push_back(tv_frame_transform(normalize_direction(raw)));
    grids.push_back(build_boundary_grid(frames.back(), options.spec, options.beta));
  }
  // The fastest frame sets the scale.
  lbm::UnitScale scale{options.solver.u_lattice_max};
  for (const auto & g : grids) {
    scale.c_u = std::min(scale.c_u, lbm::UnitScale::for_grid(g, options.solver.u_lattice_max).c_u);
  }

  std::vector<FrameSolution> out;
  std::optional<lbm::LatticeState> warm;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (warm) warm = warm_state(*warm, grids[k], scale);
    lbm::SolveResult res = lbm::solve(grids[k], options.solver, scale, warm);
    FrameSolution sol;
    sol.occupancy = rasterize_occupancy(frames[k], options.spec);
    sol.field = to_physical(res.state, scale, options.spec, grids[k].placement);
    sol.iterations = res.iterations;
    sol.converged = res.converged;
    sol.last_delta = res.last_delta;
    out.push_back(std::move(sol));
    if (options.solver.warm_start) warm = std::move(res.state);
  }
  return out;
}

VvfVolume to_volume(const std::vector<FrameSolution> & frames)
{
  std::vector<OccupancyGrid> grids;
  std::vector<VelocityField> fields;
  for (const auto & f : frames) {
    grids.push_back(f.occupancy);
    fields.push_back(f.field);
  }
  return make_volume(grids, fields);
}

}  // namespace vvflow
