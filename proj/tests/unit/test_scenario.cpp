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


#include <sstream>
#include <string>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"
#include "scenario.hpp"

using namespace vvflow;

namespace
{

std::string format_error(const std::string & text)
{
  std::istringstream is(text);
  try {
    (void)parse_scenario(is);
  } catch (const Error & e) {
    CHECK(e.code() == ErrorCode::Format);
    return e.what();
  }
  return {};
}

const char * kRoad = "[road]\nedges = -3.75 3.75\nmarkings = 0\nspeeds = 30 30\n";

}  // namespace

TEST_CASE("bundled slow-lead scenario")
{
  const SceneSequence s = load_scenario(test::data_dir() / "slow_lead.scn");
  REQUIRE(s.frames.size() == 1);
  const SceneFrame & f = s.frames[0];
  CHECK(f.layout.road_edge_offsets == std::pair<double, double>{-3.75, 3.75});
  CHECK(f.layout.lane_marking_offsets == std::vector<double>{0.0});
  REQUIRE(f.vehicles.size() == 2);
  CHECK(f.target()->id == 1);
  CHECK(f.vehicles[1].velocity == Vec2{20.0, 0.0});
  CHECK(f.vehicles[1].length == 4.5);
  REQUIRE(s.future_truth.size() == 25);
  CHECK(s.future_truth.points[24].x == doctest::Approx(150.0));
}

TEST_CASE("observed window is filled backwards at constant velocity")
{
  const SceneSequence s = load_scenario(test::data_dir() / "slow_lead_h3.scn");
  REQUIRE(s.frames.size() == 3);
  CHECK_NOTHROW(s.validate());
  CHECK(s.frames[2].vehicles[0].center == Vec2{0.0, -1.875});
  CHECK(s.frames[0].vehicles[0].center.x == doctest::Approx(-12.0));
  CHECK(s.frames[0].vehicles[1].center.x == doctest::Approx(12.0));
  CHECK(s.frames[1].timestamp == doctest::Approx(0.2));
}

TEST_CASE("right-to-left future is normalised")
{
  std::istringstream is(
    "[road]\nedges = -3.75 3.75\nmarkings = 0\nspeeds = 30 30\ndirection = right_to_left\nhorizon = 5\n"
    "[vehicle]\nid = 1\ntarget = yes\ncenter = 0 1.875\nvelocity = -25 0\nextent = 4.5 1.8\n");
  const SceneSequence s = parse_scenario(is);
  REQUIRE(s.future_truth.size() == 5);
  CHECK(s.future_truth.points[4].x == doctest::Approx(25.0));
  CHECK(s.future_truth.points[4].y == 0.0);
}

TEST_CASE("scenario errors name the line")
{
  CHECK(format_error("[vehicle]\nid = 1\n").find("no [road]") != std::string::npos);
  CHECK(format_error(std::string(kRoad) + "bogus = 1\n").find("line 5") != std::string::npos);
  CHECK(format_error(std::string(kRoad) + "[vehicle]\ncenter = 1\n").find("line 6") != std::string::npos);
  CHECK(format_error(std::string(kRoad) + "[vehicle]\ncenter = 1 x\n").find("not a number") != std::string::npos);
  CHECK(format_error(std::string(kRoad) + "frames = 0\n").find("line 5") != std::string::npos);
  CHECK(format_error(std::string(kRoad) + "direction = up\n").find("line 5") != std::string::npos);
  CHECK(format_error(std::string(kRoad) + "[lanes]\n").find("unknown block") != std::string::npos);
  CHECK(format_error("edges = 1 2\n").find("line 1") != std::string::npos);
  CHECK(format_error(std::string(kRoad) + "[road]\n").find("duplicate") != std::string::npos);
  CHECK(format_error(std::string(kRoad) + "[vehicle]\ntarget = maybe\n").find("line 6") != std::string::npos);
}

TEST_CASE("scenario semantic errors")
{
  std::istringstream no_target(std::string(kRoad) + "[vehicle]\nid = 1\ncenter = 0 0\nvelocity = 30 0\nextent = 4 2\n");
  try {
    (void)parse_scenario(no_target);
    FAIL("expected MissingTargetVehicle");
  } catch (const Error & e) {
    CHECK(e.code() == ErrorCode::MissingTargetVehicle);
  }
  CHECK_THROWS_AS((void)load_scenario(test::data_dir() / "absent.scn"), Error);
}
