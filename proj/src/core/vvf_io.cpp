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


#include "vvf_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <string>

#include "error.hpp"

namespace vvflow
{

namespace
{

constexpr char kMagic[4] = {'V', 'V', 'F', '1'};

template <typename T>
void put_le(std::string & buf, T v)
{
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFFu));
  }
}

template <typename T>
T get_le(const unsigned char * p)
{
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return static_cast<T>(v);
}

void check_pairs(const std::vector<OccupancyGrid> & grids, const std::vector<VelocityField> & fields)
{
  if (grids.size() != fields.size()) {
    fail(ErrorCode::ShapeMismatch, "need one velocity field per occupancy grid");
  }
  if (grids.empty()) fail(ErrorCode::ShapeMismatch, "no frames to stack");
  const GridSpec & s = grids.front().spec;
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const auto & g = grids[k].cells;
    const auto & f = fields[k];
    if (
      g.rows() != s.width_px || g.cols() != s.length_px || f.vx.rows() != s.width_px ||
      f.vx.cols() != s.length_px || f.vy.rows() != s.width_px || f.vy.cols() != s.length_px) {
      fail(ErrorCode::ShapeMismatch, "frame " + std::to_string(k) + " has a different grid size");
    }
  }
}

}  // namespace

std::size_t VvfVolume::expected_size() const
{
  return static_cast<std::size_t>(frame_count) * channels * width_px * length_px;
}

void VvfVolume::validate() const
{
  if (data.size() != expected_size()) {
    fail(
      ErrorCode::ShapeMismatch, "payload holds " + std::to_string(data.size()) + " values, header implies " +
                                  std::to_string(expected_size()));
  }
}

void write_vvf(std::ostream & os, const VvfVolume & volume)
{
  volume.validate();
  std::string buf;
  buf.reserve(kVvfHeaderBytes + 4 * volume.data.size());
  buf.append(kMagic, 4);
  put_le<std::uint16_t>(buf, kVvfVersion);
  put_le<std::uint16_t>(buf, volume.channels);
  put_le<std::uint32_t>(buf, volume.length_px);
  put_le<std::uint32_t>(buf, volume.width_px);
  put_le<std::uint32_t>(buf, volume.frame_count);
  for (float v : volume.data) put_le<std::uint32_t>(buf, std::bit_cast<std::uint32_t>(v));
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) fail(ErrorCode::Io, "failed to write VVF data");
}

void write_vvf(const std::filesystem::path & path, const VvfVolume & volume)
{
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  write_vvf(os, volume);
  os.close();
  if (!os) fail(ErrorCode::Io, "failed to write '" + path.string() + "'");
}

VvfVolume read_vvf(std::istream & is)
{
  const std::string bytes{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  if (is.bad()) fail(ErrorCode::Io, "failed to read VVF data");
  if (bytes.size() < kVvfHeaderBytes) fail(ErrorCode::CorruptFile, "file shorter than the VVF header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) fail(ErrorCode::CorruptFile, "bad magic, not a VVF file");
  const auto * p = reinterpret_cast<const unsigned char *>(bytes.data());
  const auto version = get_le<std::uint16_t>(p + 4);
  if (version != kVvfVersion) {
    fail(ErrorCode::CorruptFile, "unsupported VVF version " + std::to_string(version));
  }
  VvfVolume v;
  v.channels = get_le<std::uint16_t>(p + 6);
  v.length_px = get_le<std::uint32_t>(p + 8);
  v.width_px = get_le<std::uint32_t>(p + 12);
  v.frame_count = get_le<std::uint32_t>(p + 16);

  std::uint64_t n = 4;
  bool overflow = false;
  for (const std::uint64_t f : {std::uint64_t{v.frame_count}, std::uint64_t{v.channels},
                                std::uint64_t{v.width_px}, std::uint64_t{v.length_px}}) {
    if (f != 0 && n > std::numeric_limits<std::uint64_t>::max() / f) overflow = true;
    n *= f;
  }
  const std::size_t payload = bytes.size() - kVvfHeaderBytes;
  if (overflow || n != payload) {
    fail(
      ErrorCode::CorruptFile, "payload is " + std::to_string(payload) +
                                " bytes, header implies a different size");
  }
  v.data.resize(payload / 4);
  for (std::size_t i = 0; i < v.data.size(); ++i) {
    v.data[i] = std::bit_cast<float>(get_le<std::uint32_t>(p + kVvfHeaderBytes + 4 * i));
  }
  return v;
}

VvfVolume read_vvf(const std::filesystem::path & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return read_vvf(is);
}

VvfVolume make_volume(const std::vector<OccupancyGrid> & grids, const std::vector<VelocityField> & fields)
{
  check_pairs(grids, fields);
  const GridSpec & s = grids.front().spec;
  VvfVolume v;
  v.channels = 3;
  v.length_px = static_cast<std::uint32_t>(s.length_px);
  v.width_px = static_cast<std::uint32_t>(s.width_px);
  v.frame_count = static_cast<std::uint32_t>(grids.size());
  v.data.resize(v.expected_size());
  for (std::size_t k = 0; k < grids.size(); ++k) {
    for (std::size_t r = 0; r < s.width_px; ++r) {
      for (std::size_t c = 0; c < s.length_px; ++c) {
        v.data[v.index(k, 0, r, c)] = static_cast<float>(grids[k].cells(r, c));
        v.data[v.index(k, 1, r, c)] = static_cast<float>(fields[k].vx(r, c));
        v.data[v.index(k, 2, r, c)] = static_cast<float>(fields[k].vy(r, c));
      }
    }
  }
  return v;
}

TensorStack build_tensor_stack(const VvfVolume & volume)
{
  volume.validate();
  if (volume.channels != 3) {
    fail(ErrorCode::ShapeMismatch, "tensor stacks need 3 channels, got " + std::to_string(volume.channels));
  }
  TensorStack t;
  t.frames = volume.frame_count;
  t.width_px = volume.width_px;
  t.length_px = volume.length_px;
  t.initial = volume.data;
  t.reconstructed.resize(t.initial.size());
  const std::size_t plane = t.width_px * t.length_px;
  for (std::size_t k = 0; k < t.frames; ++k) {
    for (std::size_t ch = 0; ch < 3; ++ch) {
      const float * src = t.initial.data() + (k * 3 + ch) * plane;
      float * dst = t.reconstructed.data() + (ch * t.frames + k) * plane;
      std::copy(src, src + plane, dst);
    }
  }
  return t;
}

TensorStack build_tensor_stack(
  const std::vector<OccupancyGrid> & grids, const std::vector<VelocityField> & fields)
{
  return build_tensor_stack(make_volume(grids, fields));
}

VvfVolume reconstructed_volume(const TensorStack & stack)
{
  VvfVolume v;
  v.channels = 3;
  v.length_px = static_cast<std::uint32_t>(stack.length_px);
  v.width_px = static_cast<std::uint32_t>(stack.frames * stack.width_px);
  v.frame_count = 1;
  v.data = stack.reconstructed;
  v.validate();
  return v;
}

VelocityField field_from_volume(const VvfVolume & volume, std::size_t frame, const GridSpec & spec)
{
  volume.validate();
  if (volume.channels != 3 || volume.width_px != spec.width_px || volume.length_px != spec.length_px) {
    fail(ErrorCode::ShapeMismatch, "volume does not match the grid geometry");
  }
  if (frame >= volume.frame_count) fail(ErrorCode::InvalidArgument, "frame index out of range");
  double sum_r = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < spec.width_px; ++r) {
    for (std::size_t c = 0; c < spec.length_px; ++c) {
      if (volume.data[volume.index(frame, 0, r, c)] == 2.0f) {
        sum_r += static_cast<double>(r) + 0.5;
        ++n;
      }
    }
  }
  if (n == 0) fail(ErrorCode::MissingTargetVehicle, "frame has no target cells");
  GridPlacement place;
  place.x_min = -spec.rear_fraction * spec.longitudinal_extent;
  place.y_min = -(sum_r / static_cast<double>(n)) * spec.res_lat();
  VelocityField field(spec, place);
  for (std::size_t r = 0; r < spec.width_px; ++r) {
    for (std::size_t c = 0; c < spec.length_px; ++c) {
      field.vx(r, c) = volume.data[volume.index(frame, 1, r, c)];
      field.vy(r, c) = volume.data[volume.index(frame, 2, r, c)];
    }
  }
  return field;
}

}  // namespace vvflow
