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

#include "scene.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "error.hpp"

namespace vvflow
{

double RoadLayout::max_nominal_speed() const
{
  double top = 0.0;
  for (double s : lane_nominal_speeds) top = std::max(top, s);
  return top;
}

std::optional<std::size_t> RoadLayout::lane_at(double y) const
{
  if (y < road_edge_offsets.first || y > road_edge_offsets.second) return std::nullopt;
  const auto it = std::upper_bound(lane_marking_offsets.begin(), lane_marking_offsets.end(), y);
  return static_cast<std::size_t>(it - lane_marking_offsets.begin());
}

void RoadLayout::validate() const
{
  const auto [lower, upper] = road_edge_offsets;
  if (!(lower < upper)) fail(ErrorCode::InvalidArgument, "road edges must satisfy lower < upper");
  if (!std::is_sorted(lane_marking_offsets.begin(), lane_marking_offsets.end())) {
    fail(ErrorCode::InvalidArgument, "lane markings must be sorted ascending");
  }
  for (double m : lane_marking_offsets) {
    if (!(m > lower && m < upper)) {
      fail(ErrorCode::InvalidArgument, "lane marking " + std::to_string(m) + " outside road edges");
    }
  }
  if (lane_nominal_speeds.size() != lane_count()) {
    fail(
      ErrorCode::InvalidArgument, "expected " + std::to_string(lane_count()) +
                                    " lane speeds, got " +
                                    std::to_string(lane_nominal_speeds.size()));
  }
  for (double s : lane_nominal_speeds) {
    if (!(s > 0.0)) fail(ErrorCode::InvalidArgument, "lane nominal speeds must be positive");
  }
}

const Vehicle * SceneFrame::target() const
{
  for (const auto & v : vehicles) {
    if (v.is_target) return &v;
  }
  return nullptr;
}

void SceneFrame::validate() const
{
  layout.validate();
  std::set<int> ids;
  int targets = 0;
  for (const auto & v : vehicles) {
    if (!(v.length > 0.0 && v.width > 0.0)) {
      fail(ErrorCode::InvalidArgument, "vehicle " + std::to_string(v.id) + " has empty extent");
    }
    if (!ids.insert(v.id).second) {
      fail(ErrorCode::InvalidArgument, "duplicate vehicle id " + std::to_string(v.id));
    }
    targets += v.is_target ? 1 : 0;
  }
  if (targets == 0) fail(ErrorCode::MissingTargetVehicle, "frame has no target vehicle");
  if (targets > 1) fail(ErrorCode::InvalidArgument, "frame has more than one target vehicle");
}

int SceneSequence::target_id() const
{
  if (frames.empty()) fail(ErrorCode::InvalidArgument, "empty scene sequence");
  const Vehicle * tv = frames.front().target();
  if (tv == nullptr) fail(ErrorCode::MissingTargetVehicle, "first frame has no target vehicle");
  return tv->id;
}

void SceneSequence::validate() const
{
  const int tv = target_id();
  for (std::size_t k = 0; k < frames.size(); ++k) {
    frames[k].validate();
    if (frames[k].target()->id != tv) {
      fail(ErrorCode::InvalidArgument, "target vehicle changes within sequence");
    }
    if (k > 0 && std::abs(frames[k].timestamp - frames[k - 1].timestamp - kFrameStep) > 1e-9) {
      fail(ErrorCode::InvalidArgument, "frame timestamps must step by 0.2 s");
    }
  }
}

SceneFrame normalize_direction(const SceneFrame & frame)
{
  if (frame.layout.drive_direction == DriveDirection::LeftToRight) return frame;

  const double c = frame.layout.centerline();
  SceneFrame out = frame;
  for (auto & v : out.vehicles) {
    v.center = {-v.center.x, 2.0 * c - v.center.y};
    v.velocity = -v.velocity;
  }
  auto & layout = out.layout;
  for (auto & m : layout.lane_marking_offsets) m = 2.0 * c - m;
  std::reverse(layout.lane_marking_offsets.begin(), layout.lane_marking_offsets.end());
  std::reverse(layout.lane_nominal_speeds.begin(), layout.lane_nominal_speeds.end());
  const auto [lower, upper] = frame.layout.road_edge_offsets;
  layout.road_edge_offsets = {2.0 * c - upper, 2.0 * c - lower};
  layout.drive_direction = DriveDirection::LeftToRight;
  return out;
}

SceneFrame tv_frame_transform(const SceneFrame & frame)
{
  const Vehicle * tv = frame.target();
  if (tv == nullptr) fail(ErrorCode::MissingTargetVehicle, "frame has no target vehicle");
  const Vec2 origin = tv->center;

  SceneFrame out = frame;
  for (auto & v : out.vehicles) v.center = v.center - origin;
  for (auto & m : out.layout.lane_marking_offsets) m -= origin.y;
  out.layout.road_edge_offsets.first -= origin.y;
  out.layout.road_edge_offsets.second -= origin.y;
  return out;
}

}  // namespace vvflow
