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

#include "raster.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "error.hpp"

namespace vvflow
{
namespace
{

struct CellRange
{
  std::size_t lo{0};
  std::size_t hi{0};  // exclusive
};

// Indices whose centres lie in [a, b] along one axis with origin `min`.
// Candidates are widened by one and re-checked with the exact predicate.
CellRange centers_within(double a, double b, double min, double res, std::size_t n)
{
  const double lo_f = std::floor((a - min) / res - 0.5) - 1.0;
  const double hi_f = std::ceil((b - min) / res - 0.5) + 1.0;
  const auto clamp = [n](double v) {
    return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(n)));
  };
  std::size_t lo = clamp(lo_f);
  std::size_t hi = clamp(hi_f + 1.0);
  const auto center = [&](std::size_t i) { return min + (static_cast<double>(i) + 0.5) * res; };
  while (lo < hi && center(lo) < a) ++lo;
  while (hi > lo && center(hi - 1) > b) --hi;
  return {lo, hi};
}

template <typename Fn>
void for_each_footprint_cell(
  const Vehicle & v, const GridSpec & spec, const GridPlacement & place, Fn && fn)
{
  const CellRange cols = centers_within(
    v.center.x - 0.5 * v.length, v.center.x + 0.5 * v.length, place.x_min, spec.res_lon(),
    spec.length_px);
  const CellRange rows = centers_within(
    v.center.y - 0.5 * v.width, v.center.y + 0.5 * v.width, place.y_min, spec.res_lat(),
    spec.width_px);
  for (std::size_t r = rows.lo; r < rows.hi; ++r) {
    for (std::size_t c = cols.lo; c < cols.hi; ++c) fn(r, c);
  }
}

Vec2 clamp_speed(Vec2 v, double limit)
{
  const double n = v.norm();
  if (n <= limit || n == 0.0) return v;
  return (limit / n) * v;
}

}  // namespace

void GridSpec::validate() const
{
  if (width_px < 2 || length_px < 2) fail(ErrorCode::InvalidArgument, "grid needs at least 2x2 cells");
  if (!(lateral_extent > 0.0 && longitudinal_extent > 0.0)) {
    fail(ErrorCode::InvalidArgument, "grid extents must be positive");
  }
  if (!(rear_fraction >= 0.0 && rear_fraction < 1.0)) {
    fail(ErrorCode::InvalidArgument, "rear_fraction must lie in [0, 1)");
  }
}

GridPlacement GridPlacement::for_frame(const SceneFrame & frame, const GridSpec & spec)
{
  const Vehicle * tv = frame.target();
  if (tv == nullptr) fail(ErrorCode::MissingTargetVehicle, "frame has no target vehicle");
  return {
    tv->center.x - spec.rear_fraction * spec.longitudinal_extent,
    frame.layout.centerline() - 0.5 * spec.lateral_extent};
}

double BoundaryGrid::max_imposed_speed() const
{
  double top = 0.0;
  for (const auto & c : cells.data()) {
    if (c.is_dirichlet()) top = std::max(top, c.velocity.norm());
  }
  return top;
}

std::size_t BoundaryGrid::count(CellKind kind) const
{
  return static_cast<std::size_t>(std::count_if(
    cells.data().begin(), cells.data().end(), [kind](const CellClass & c) { return c.kind == kind; }));
}

OccupancyGrid rasterize_occupancy(const SceneFrame & frame, const GridSpec & spec)
{
  spec.validate();
  OccupancyGrid grid{spec, GridPlacement::for_frame(frame, spec),
                     Grid2D<Occupancy>(spec.width_px, spec.length_px, Occupancy::Free)};
  for (const auto & v : frame.vehicles) {
    const Occupancy label = v.is_target ? Occupancy::OccupiedTV : Occupancy::OccupiedSV;
    for_each_footprint_cell(v, spec, grid.placement, [&](std::size_t r, std::size_t c) {
      if (grid.cells(r, c) != Occupancy::OccupiedTV) grid.cells(r, c) = label;
    });
  }
  return grid;
}

BoundaryGrid build_boundary_grid(const SceneFrame & frame, const GridSpec & spec, double beta)
{
  spec.validate();
  if (!(beta >= 0.0 && beta <= 1.0)) fail(ErrorCode::InvalidArgument, "beta must lie in [0, 1]");
  const RoadLayout & layout = frame.layout;
  layout.validate();

  BoundaryGrid grid;
  grid.spec = spec;
  grid.placement = GridPlacement::for_frame(frame, spec);
  grid.cells = Grid2D<CellClass>(spec.width_px, spec.length_px);

  const double y_min = grid.placement.y_min;
  const double y_max = y_min + spec.lateral_extent;
  const auto [lower, upper] = layout.road_edge_offsets;
  if (lower < y_min - 1e-9 || upper > y_max + 1e-9) {
    fail(
      ErrorCode::LayoutOutOfGrid, "road width " + std::to_string(upper - lower) +
                                    " m exceeds lateral extent " +
                                    std::to_string(spec.lateral_extent) + " m");
  }

  const std::size_t rows = spec.width_px;
  const std::size_t cols = spec.length_px;
  const double res = spec.res_lat();

  // Rows whose centres fall outside the open road interval are solid.
  std::vector<bool> wall_row(rows, false);
  std::vector<bool> marking_row(rows, false);
  grid.row_nominal_speed.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = y_min + (static_cast<double>(r) + 0.5) * res;
    wall_row[r] = !(y > lower && y < upper);
    if (!wall_row[r]) grid.row_nominal_speed[r] = layout.lane_nominal_speeds[*layout.lane_at(y)];
  }
  for (double m : layout.lane_marking_offsets) {
    const auto r = static_cast<std::size_t>(
      std::clamp(std::floor((m - y_min) / res), 0.0, static_cast<double>(rows - 1)));
    if (wall_row[r]) continue;
    marking_row[r] = true;
    const auto lane = *layout.lane_at(m);
    // A marking row straddles two lanes.
    grid.row_nominal_speed[r] =
      0.5 * (layout.lane_nominal_speeds[lane - 1] + layout.lane_nominal_speeds[lane]);
  }

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      CellClass & cell = grid.cells(r, c);
      if (wall_row[r]) {
        cell.kind = CellKind::NoSlipWall;
      } else if (c == 0) {
        cell.kind = CellKind::Inlet;
        cell.velocity = {grid.row_nominal_speed[r], 0.0};
      } else if (c + 1 == cols) {
        cell.kind = CellKind::Outlet;
      } else if (marking_row[r]) {
        cell.kind = CellKind::PorousMarking;
        cell.beta = beta;
      }
    }
  }

  const double speed_cap = 2.0 * layout.max_nominal_speed();
  // Targets are painted last so they win on overlap, matching the occupancy grid.
  std::vector<const Vehicle *> order;
  for (const auto & v : frame.vehicles) {
    if (!v.is_target) order.push_back(&v);
  }
  if (const Vehicle * tv = frame.target()) order.push_back(tv);
  for (const Vehicle * v : order) {
    const Vec2 u = clamp_speed(v->velocity, speed_cap);
    for_each_footprint_cell(*v, spec, grid.placement, [&](std::size_t r, std::size_t c) {
      grid.cells(r, c) = CellClass{CellKind::VehicleDirichlet, 0.0, u};
    });
  }
  return grid;
}

CellIndex tv_anchor(const GridSpec & spec, double tv_offset_from_centerline)
{
  const double col = std::floor(spec.rear_fraction * static_cast<double>(spec.length_px));
  const double row =
    std::floor((tv_offset_from_centerline + 0.5 * spec.lateral_extent) / spec.res_lat());
  const auto clamp = [](double v, std::size_t n) {
    return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(n - 1)));
  };
  return {clamp(row, spec.width_px), clamp(col, spec.length_px)};
}

void write_pgm(std::ostream & os, const OccupancyGrid & grid)
{
  const auto & cells = grid.cells;
  os << "P5\n" << cells.cols() << ' ' << cells.rows() << "\n2\n";
  for (std::size_t r = cells.rows(); r-- > 0;) {
    for (std::size_t c = 0; c < cells.cols(); ++c) {
      os.put(static_cast<char>(cells(r, c)));
    }
  }
}

}  // namespace vvflow
