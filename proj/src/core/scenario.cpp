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


#include "scenario.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace vvflow
{

namespace
{

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

struct Parser
{
  std::size_t line{0};

  [[noreturn]] void error(const std::string & what) const
  {
    fail(ErrorCode::Format, "scenario line " + std::to_string(line) + ": " + what);
  }

  std::vector<double> numbers(const std::string & value, std::size_t min_n, std::size_t max_n) const
  {
    std::istringstream ss(value);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception &) {
        error("not a number: '" + tok + "'");
      }
    }
    if (out.size() < min_n || out.size() > max_n) {
      error("expected " + std::to_string(min_n) + (min_n == max_n ? "" : "+") + " numbers");
    }
    return out;
  }

  Vec2 pair(const std::string & value) const
  {
    const auto v = numbers(value, 2, 2);
    return {v[0], v[1]};
  }

  bool boolean(const std::string & value) const
  {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    error("expected true or false, got '" + value + "'");
  }

  std::size_t count(const std::string & value) const
  {
    const auto v = numbers(value, 1, 1);
    if (v[0] < 0 || v[0] != static_cast<double>(static_cast<std::size_t>(v[0]))) {
      error("expected a non-negative integer");
    }
    return static_cast<std::size_t>(v[0]);
  }
};

}  // namespace

SceneSequence parse_scenario(std::istream & is)
{
  Parser ps;
  RoadLayout layout;
  std::vector<Vehicle> vehicles;
  std::size_t frames = 1;
  std::size_t horizon = 0;
  enum class Block { None, Road, Vehicle } block = Block::None;
  bool have_road = false;

  std::string raw;
  while (std::getline(is, raw)) {
    ++ps.line;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line == "[road]") {
      if (have_road) ps.error("duplicate [road] block");
      block = Block::Road;
      have_road = true;
      continue;
    }
    if (line == "[vehicle]") {
      block = Block::Vehicle;
      vehicles.emplace_back();
      continue;
    }
    if (line.front() == '[') ps.error("unknown block " + line);
    const auto eq = line.find('=');
    if (eq == std::string::npos) ps.error("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (block == Block::Road) {
      if (key == "edges") {
        const Vec2 e = ps.pair(value);
        layout.road_edge_offsets = {e.x, e.y};
      } else if (key == "markings") {
        layout.lane_marking_offsets = ps.numbers(value, 0, 64);
      } else if (key == "speeds") {
        layout.lane_nominal_speeds = ps.numbers(value, 1, 65);
      } else if (key == "direction") {
        if (value == "left_to_right") {
          layout.drive_direction = DriveDirection::LeftToRight;
        } else if (value == "right_to_left") {
          layout.drive_direction = DriveDirection::RightToLeft;
        } else {
          ps.error("direction must be left_to_right or right_to_left");
        }
      } else if (key == "frames") {
        frames = ps.count(value);
        if (frames == 0) ps.error("frames must be at least 1");
      } else if (key == "horizon") {
        horizon = ps.count(value);
      } else {
        ps.error("unknown road key '" + key + "'");
      }
    } else if (block == Block::Vehicle) {
      Vehicle & v = vehicles.back();
      if (key == "id") {
        v.id = static_cast<int>(ps.numbers(value, 1, 1)[0]);
      } else if (key == "target") {
        v.is_target = ps.boolean(value);
      } else if (key == "center") {
        v.center = ps.pair(value);
      } else if (key == "velocity") {
        v.velocity = ps.pair(value);
      } else if (key == "extent") {
        const Vec2 e = ps.pair(value);
        v.length = e.x;
        v.width = e.y;
      } else {
        ps.error("unknown vehicle key '" + key + "'");
      }
    } else {
      ps.error("key outside of a block");
    }
  }
  if (!have_road) fail(ErrorCode::Format, "scenario has no [road] block");

  SceneSequence seq;
  for (std::size_t k = 0; k < frames; ++k) {
    const double back = static_cast<double>(frames - 1 - k) * kFrameStep;
    SceneFrame f;
    f.timestamp = static_cast<double>(k) * kFrameStep;
    f.layout = layout;
    f.vehicles = vehicles;
    for (auto & v : f.vehicles) v.center = v.center - back * v.velocity;
    seq.frames.push_back(std::move(f));
  }
  seq.validate();
  if (horizon > 0) {
    const SceneFrame last = normalize_direction(seq.frames.back());
    const Vec2 v = last.target()->velocity;
    for (std::size_t j = 1; j <= horizon; ++j) {
      seq.future_truth.points.push_back((static_cast<double>(j) * kFrameStep) * v);
    }
  }
  return seq;
}

SceneSequence load_scenario(const std::filesystem::path & path)
{
  std::ifstream is(path);
  if (!is) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return parse_scenario(is);
}

}  // namespace vvflow
