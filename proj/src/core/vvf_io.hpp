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


#ifndef VVFLOW_CORE_VVF_IO_HPP_
#define VVFLOW_CORE_VVF_IO_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "flowfield.hpp"
#include "raster.hpp"

namespace vvflow
{

inline constexpr std::uint16_t kVvfVersion = 1;
inline constexpr std::size_t kVvfHeaderBytes = 20;

/// Contents of a .vvf file: float32 samples ordered frame, channel, row
/// (lateral, lowest first), column (longitudinal).
struct VvfVolume
{
  std::uint16_t channels{0};
  std::uint32_t length_px{0};
  std::uint32_t width_px{0};
  std::uint32_t frame_count{0};
  std::vector<float> data;

  std::size_t expected_size() const;
  std::size_t index(std::size_t frame, std::size_t channel, std::size_t row, std::size_t col) const
  {
    return ((frame * channels + channel) * width_px + row) * length_px + col;
  }
  void validate() const;

  friend bool operator==(const VvfVolume &, const VvfVolume &) = default;
};

/// Little-endian, no padding.
void write_vvf(std::ostream & os, const VvfVolume & volume);
void write_vvf(const std::filesystem::path & path, const VvfVolume & volume);
/// Throws CorruptFile on bad magic, version or payload size; Io when unreadable.
VvfVolume read_vvf(std::istream & is);
VvfVolume read_vvf(const std::filesystem::path & path);

using Shape3 = std::array<std::size_t, 3>;

/// Per-frame [occupancy; vx; vy] stacked vertically, shape (h, 3*w, l), and
/// the per-channel concatenation of all frames, shape (3, h*w, l).
struct TensorStack
{
  std::size_t frames{0};
  std::size_t width_px{0};
  std::size_t length_px{0};
  std::vector<float> initial;
  std::vector<float> reconstructed;

  Shape3 initial_shape() const { return {frames, 3 * width_px, length_px}; }
  Shape3 reconstructed_shape() const { return {3, frames * width_px, length_px}; }
};

/// Three-channel volume, one frame per grid/field pair. Throws ShapeMismatch.
VvfVolume make_volume(const std::vector<OccupancyGrid> & grids, const std::vector<VelocityField> & fields);

TensorStack build_tensor_stack(
  const std::vector<OccupancyGrid> & grids, const std::vector<VelocityField> & fields);
/// The initial layout is the volume payload itself. Requires three channels.
TensorStack build_tensor_stack(const VvfVolume & volume);

/// The reconstructed layout as a single-frame, three-channel volume.
VvfVolume reconstructed_volume(const TensorStack & stack);

/// Velocity channels of one frame. The placement puts the centroid of the
/// target cells (occupancy 2) at the origin and the rear edge at the usual
/// rear fraction. Throws MissingTargetVehicle when the frame has no target cells.
VelocityField field_from_volume(const VvfVolume & volume, std::size_t frame, const GridSpec & spec);

}  // namespace vvflow

#endif  // VVFLOW_CORE_VVF_IO_HPP_
