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

#ifndef VVFLOW_CORE_SCENE_HPP_
#define VVFLOW_CORE_SCENE_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace vvflow
{

/// Sampling period of scene sequences and trajectories, seconds.
inline constexpr double kFrameStep = 0.2;

struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
  double norm() const { return std::hypot(x, y); }
};

enum class DriveDirection { LeftToRight, RightToLeft };

// World frame: x longitudinal (travel direction once normalized), y lateral,
// right-handed. Vehicle boxes are axis aligned.
struct Vehicle
{
  int id{0};
  Vec2 center;
  Vec2 velocity;
  double length{0.0};
  double width{0.0};
  bool is_target{false};
};

struct RoadLayout
{
  // Lateral positions of passable (dashed) markings, ascending.
  std::vector<double> lane_marking_offsets;
  // (lower, upper) lateral positions of the impassable road edges.
  std::pair<double, double> road_edge_offsets{0.0, 0.0};
  // Indexed by lane, lane 0 lying between the lower edge and the first marking.
  std::vector<double> lane_nominal_speeds;
  DriveDirection drive_direction{DriveDirection::LeftToRight};

  std::size_t lane_count() const { return lane_marking_offsets.size() + 1; }
  double centerline() const { return 0.5 * (road_edge_offsets.first + road_edge_offsets.second); }
  double max_nominal_speed() const;
  /// Lane containing lateral position y, or nullopt outside the road edges.
  std::optional<std::size_t> lane_at(double y) const;

  void validate() const;
};

struct SceneFrame
{
  double timestamp{0.0};
  std::vector<Vehicle> vehicles;
  RoadLayout layout;

  const Vehicle * target() const;
  void validate() const;
};

struct Trajectory
{
  // Positions after 1*dt ... p*dt.
  std::vector<Vec2> points;
  double dt{kFrameStep};
  // Set when the path left the field and was continued by extrapolation.
  bool extrapolated{false};

  std::size_t size() const { return points.size(); }
};

struct SceneSequence
{
  std::vector<SceneFrame> frames;
  // Future positions of the target vehicle in the target-centred frame of the
  // last observed frame. May be empty for synthetic scenes without a future.
  Trajectory future_truth;

  int target_id() const;
  void validate() const;
};

/// Rotates a right-to-left frame by 180 degrees about the road centre so that
/// traffic flows towards +x. Left-to-right frames are returned unchanged.
SceneFrame normalize_direction(const SceneFrame & frame);

/// Translates the frame so that the target vehicle sits at the origin. The
/// road layout offsets move with it. Throws MissingTargetVehicle.
SceneFrame tv_frame_transform(const SceneFrame & frame);

}  // namespace vvflow

#endif  // VVFLOW_CORE_SCENE_HPP_
