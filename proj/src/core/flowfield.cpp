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


#include "flowfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace vvflow
{

VelocityField::VelocityField(const GridSpec & spec_, const GridPlacement & placement_)
: spec(spec_),
  placement(placement_),
  vx(spec_.width_px, spec_.length_px),
  vy(spec_.width_px, spec_.length_px)
{
}

VelocityField to_physical(
  const lbm::LatticeState & state, const lbm::UnitScale & scale, const GridSpec & spec,
  const GridPlacement & placement)
{
  if (state.rows != spec.width_px || state.cols != spec.length_px) {
    fail(ErrorCode::ShapeMismatch, "lattice state does not match the grid geometry");
  }
  VelocityField field(spec, placement);
  for (std::size_t i = 0; i < state.cells(); ++i) {
    const Vec2 v = scale.to_physical({state.ux[i], state.uy[i]});
    field.vx[i] = v.x;
    field.vy[i] = v.y;
  }
  return field;
}

Vec2 sample_velocity(const VelocityField & field, Vec2 pos)
{
  const GridSpec & s = field.spec;
  const double lx = pos.x - field.placement.x_min;
  const double ly = pos.y - field.placement.y_min;
  if (!(lx >= 0.0 && lx <= s.longitudinal_extent && ly >= 0.0 && ly <= s.lateral_extent)) {
    fail(
      ErrorCode::OutOfField,
      "position (" + std::to_string(pos.x) + ", " + std::to_string(pos.y) + ") outside the field");
  }
  // Continuous index space with cell centres on integers.
  const auto axis = [](double offset, double res, std::size_t n, std::size_t & i0, double & t) {
    const double u = std::clamp(offset / res - 0.5, 0.0, static_cast<double>(n - 1));
    i0 = std::min(static_cast<std::size_t>(u), n > 1 ? n - 2 : 0);
    t = n > 1 ? u - static_cast<double>(i0) : 0.0;
  };
  std::size_t c0 = 0;
  std::size_t r0 = 0;
  double tc = 0.0;
  double tr = 0.0;
  axis(lx, s.res_lon(), s.length_px, c0, tc);
  axis(ly, s.res_lat(), s.width_px, r0, tr);
  const std::size_t c1 = std::min(c0 + 1, s.length_px - 1);
  const std::size_t r1 = std::min(r0 + 1, s.width_px - 1);
  const auto lerp = [&](const Grid2D<double> & g) {
    const double lo = (1.0 - tc) * g(r0, c0) + tc * g(r0, c1);
    const double hi = (1.0 - tc) * g(r1, c0) + tc * g(r1, c1);
    return (1.0 - tr) * lo + tr * hi;
  };
  return {lerp(field.vx), lerp(field.vy)};
}

Trajectory integrate_streamline(const VelocityField & field, Vec2 start, double dt, std::size_t steps)
{
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be > 0");
  Trajectory traj;
  traj.dt = dt;
  traj.points.reserve(steps);
  Vec2 q = start;
  Vec2 last = sample_velocity(field, q);
  for (std::size_t k = 0; k < steps; ++k) {
    if (!traj.extrapolated) {
      try {
        const Vec2 k1 = sample_velocity(field, q);
        const Vec2 k2 = sample_velocity(field, q + (0.5 * dt) * k1);
        const Vec2 k3 = sample_velocity(field, q + (0.5 * dt) * k2);
        const Vec2 k4 = sample_velocity(field, q + dt * k3);
        last = k1;
        q = q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.points.push_back(q);
        continue;
      } catch (const Error & e) {
        if (e.code() != ErrorCode::OutOfField) throw;
        traj.extrapolated = true;
      }
    }
    q = q + dt * last;
    traj.points.push_back(q);
  }
  return traj;
}

std::vector<Trajectory> predict_streamlines(
  const SceneSequence & sequence, const std::vector<VelocityField> & fields,
  const StreamlineOptions & options)
{
  if (sequence.frames.empty()) fail(ErrorCode::EmptySet, "sequence has no frames");
  if (fields.size() != sequence.frames.size()) {
    fail(ErrorCode::ShapeMismatch, "expected one field per observed frame");
  }
  // Fields live in the target-centred frame, so the target starts at the origin.
  const SceneFrame frame = tv_frame_transform(normalize_direction(sequence.frames.back()));
  const Vehicle * tv = frame.target();

  const std::vector<Vec2> offsets =
    options.start_offsets.empty() ? std::vector<Vec2>{Vec2{}} : options.start_offsets;
  std::vector<Trajectory> out;
  out.reserve(offsets.size());
  for (const Vec2 & off : offsets) {
    out.push_back(integrate_streamline(fields.back(), tv->center + off, options.dt, options.steps));
  }
  return out;
}

Trajectory predict_streamline(
  const SceneSequence & sequence, const std::vector<VelocityField> & fields, std::size_t steps)
{
  StreamlineOptions options;
  options.steps = steps;
  return predict_streamlines(sequence, fields, options).front();
}

}  // namespace vvflow
