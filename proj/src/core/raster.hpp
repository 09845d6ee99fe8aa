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

#ifndef VVFLOW_CORE_RASTER_HPP_
#define VVFLOW_CORE_RASTER_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "scene.hpp"

namespace vvflow
{

/// Bird's-eye-view grid geometry. Rows run laterally (width_px of them),
/// columns longitudinally (length_px of them).
struct GridSpec
{
  std::size_t width_px{32};
  std::size_t length_px{256};
  double lateral_extent{20.0};
  double longitudinal_extent{200.0};
  // Fraction of the longitudinal extent kept behind the target vehicle.
  double rear_fraction{0.25};

  double res_lat() const { return lateral_extent / static_cast<double>(width_px); }
  double res_lon() const { return longitudinal_extent / static_cast<double>(length_px); }
  std::size_t cells() const { return width_px * length_px; }
  void validate() const;
};

/// World position of the grid's lower-left corner. The grid follows the
/// target longitudinally and the road centreline laterally.
struct GridPlacement
{
  double x_min{0.0};
  double y_min{0.0};

  static GridPlacement for_frame(const SceneFrame & frame, const GridSpec & spec);

  Vec2 cell_center(const GridSpec & spec, std::size_t row, std::size_t col) const
  {
    return {
      x_min + (static_cast<double>(col) + 0.5) * spec.res_lon(),
      y_min + (static_cast<double>(row) + 0.5) * spec.res_lat()};
  }
};

template <typename T>
class Grid2D
{
public:
  Grid2D() = default;
  Grid2D(std::size_t rows, std::size_t cols, T fill = T{})
  : rows_(rows), cols_(cols), data_(rows * cols, fill)
  {
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  std::size_t index(std::size_t row, std::size_t col) const { return row * cols_ + col; }

  T & operator()(std::size_t row, std::size_t col) { return data_[index(row, col)]; }
  const T & operator()(std::size_t row, std::size_t col) const { return data_[index(row, col)]; }
  T & operator[](std::size_t i) { return data_[i]; }
  const T & operator[](std::size_t i) const { return data_[i]; }

  const std::vector<T> & data() const { return data_; }

  friend bool operator==(const Grid2D &, const Grid2D &) = default;

private:
  std::size_t rows_{0};
  std::size_t cols_{0};
  std::vector<T> data_;
};

enum class Occupancy : std::uint8_t { Free = 0, OccupiedSV = 1, OccupiedTV = 2 };

struct OccupancyGrid
{
  GridSpec spec;
  GridPlacement placement;
  Grid2D<Occupancy> cells;
};

enum class CellKind : std::uint8_t {
  Fluid,
  NoSlipWall,
  PorousMarking,
  VehicleDirichlet,
  Inlet,
  Outlet,
};

struct CellClass
{
  CellKind kind{CellKind::Fluid};
  // Bounce-back fraction, PorousMarking only.
  double beta{0.0};
  // Imposed velocity in m/s, VehicleDirichlet and Inlet only.
  Vec2 velocity;

  bool is_dirichlet() const { return kind == CellKind::VehicleDirichlet || kind == CellKind::Inlet; }
};

struct BoundaryGrid
{
  GridSpec spec;
  GridPlacement placement;
  Grid2D<CellClass> cells;
  // Nominal longitudinal speed per row (m/s), used to initialise the flow.
  // Empty means start from rest.
  std::vector<double> row_nominal_speed;
  // Periodic wrap-around instead of open/closed domain edges. Test lattices only.
  bool periodic_x{false};
  bool periodic_y{false};

  /// Largest imposed speed over Dirichlet cells, m/s.
  double max_imposed_speed() const;
  std::size_t count(CellKind kind) const;
};

inline constexpr double kDefaultPorousBeta = 0.7;

/// A cell is occupied iff its centre lies inside a vehicle footprint (closed
/// rectangle). The target label wins on overlap; off-grid parts are clipped.
OccupancyGrid rasterize_occupancy(const SceneFrame & frame, const GridSpec & spec);

/// Boundary classes: walls beyond the road edges, porous marking rows, inlet
/// and outlet columns, vehicle footprints on top of everything.
/// Throws LayoutOutOfGrid when the road does not fit laterally.
BoundaryGrid build_boundary_grid(
  const SceneFrame & frame, const GridSpec & spec, double beta = kDefaultPorousBeta);

struct CellIndex
{
  std::size_t row{0};
  std::size_t col{0};
  friend bool operator==(CellIndex, CellIndex) = default;
};

/// Cell holding the target's centre: column length_px * rear_fraction, row
/// shifted from the lateral centre by the target's offset from the road centreline.
CellIndex tv_anchor(const GridSpec & spec, double tv_offset_from_centerline = 0.0);

/// Binary PGM (P5, maxval 2), Free=0 OccupiedSV=1 OccupiedTV=2, top image row
/// is the highest lateral row.
void write_pgm(std::ostream & os, const OccupancyGrid & grid);

}  // namespace vvflow

#endif  // VVFLOW_CORE_RASTER_HPP_
