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


#ifndef VVFLOW_TESTS_UNIT_FIXTURES_HPP_
#define VVFLOW_TESTS_UNIT_FIXTURES_HPP_

#include <filesystem>
#include <random>
#include <string>

#include "scene.hpp"

namespace vvflow::test
{

inline std::filesystem::path data_dir() { return VVFLOW_TEST_DATA_DIR; }

inline std::filesystem::path temp_path(const std::string & name)
{
  const auto dir = std::filesystem::temp_directory_path() / "vvflow_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

inline RoadLayout two_lane_road(double speed = 30.0)
{
  RoadLayout r;
  r.road_edge_offsets = {-3.75, 3.75};
  r.lane_marking_offsets = {0.0};
  r.lane_nominal_speeds = {speed, speed};
  return r;
}

inline Vehicle car(int id, Vec2 center, Vec2 velocity, bool target = false)
{
  return {id, center, velocity, 4.5, 1.8, target};
}

/// Target in the lower lane, one vehicle 20 m ahead in the same lane.
inline SceneFrame lead_frame(double lead_speed)
{
  SceneFrame f;
  f.layout = two_lane_road();
  f.vehicles = {car(1, {0.0, -1.875}, {30.0, 0.0}, true), car(2, {20.0, -1.875}, {lead_speed, 0.0})};
  return f;
}

inline SceneFrame random_frame(std::mt19937_64 & rng, DriveDirection dir)
{
  std::uniform_real_distribution<double> x(-80.0, 80.0);
  std::uniform_real_distribution<double> y(-3.5, 3.5);
  std::uniform_real_distribution<double> v(-35.0, 35.0);
  SceneFrame f;
  f.layout = two_lane_road();
  f.layout.lane_nominal_speeds = {28.0, 33.0};
  f.layout.road_edge_offsets = {-3.75, 3.75};
  f.layout.drive_direction = dir;
  for (int i = 0; i < 6; ++i) {
    f.vehicles.push_back({i + 1, {x(rng), y(rng)}, {v(rng), 0.1 * v(rng)}, 4.0 + i * 0.3, 1.8, i == 2});
  }
  return f;
}

}  // namespace vvflow::test

#endif  // VVFLOW_TESTS_UNIT_FIXTURES_HPP_
