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


#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"
#include "flowfield.hpp"
#include "pipeline.hpp"

using namespace vvflow;

namespace
{

VelocityField make_field(
  const GridSpec & spec, const GridPlacement & place, const std::function<Vec2(Vec2)> & fn)
{
  VelocityField f(spec, place);
  for (std::size_t r = 0; r < spec.width_px; ++r) {
    for (std::size_t c = 0; c < spec.length_px; ++c) {
      const Vec2 v = fn(place.cell_center(spec, r, c));
      f.vx(r, c) = v.x;
      f.vy(r, c) = v.y;
    }
  }
  return f;
}

// 40 x 40 m centred on the origin at 0.25 m.
GridSpec square_spec()
{
  GridSpec s;
  s.width_px = 160;
  s.length_px = 160;
  s.lateral_extent = 40.0;
  s.longitudinal_extent = 40.0;
  return s;
}

const GridPlacement kSquare{-20.0, -20.0};

Vec2 rotation(Vec2 p) { return {-0.5 * p.y, 0.5 * p.x}; }

SceneSequence lead_sequence(double lead)
{
  SceneSequence s;
  s.frames = {test::lead_frame(lead)};
  return s;
}

}  // namespace

TEST_CASE("lattice to physical velocity")
{
  GridSpec spec;
  spec.width_px = 2;
  spec.length_px = 3;
  lbm::LatticeState s(2, 3);
  s.ux[0] = 0.1;
  s.uy[1] = -0.05;
  const VelocityField f = to_physical(s, lbm::UnitScale{1.0 / 300.0}, spec, {});
  CHECK(f.vx[0] == doctest::Approx(30.0));
  CHECK(f.vy[1] == doctest::Approx(-15.0));
  CHECK(f.vx[5] == 0.0);
  spec.length_px = 4;
  CHECK_THROWS_AS((void)to_physical(s, lbm::UnitScale{1.0}, spec, {}), Error);
}

TEST_CASE("sampling")
{
  const GridSpec spec;
  const GridPlacement place{-50.0, -10.0};
  SUBCASE("cell centres return stored values")
  {
    VelocityField f(spec, place);
    f.vx(7, 40) = 3.5;
    f.vy(7, 40) = -1.25;
    const Vec2 v = sample_velocity(f, place.cell_center(spec, 7, 40));
    CHECK(v.x == 3.5);
    CHECK(v.y == -1.25);
  }
  SUBCASE("affine fields are reproduced inside the centre hull")
  {
    const auto fn = [](Vec2 p) { return Vec2{2.0 + 0.3 * p.x - 0.1 * p.y, -0.5 + 0.05 * p.x + 0.2 * p.y}; };
    const VelocityField f = make_field(spec, place, fn);
    for (Vec2 p : {Vec2{0.0, 0.0}, Vec2{-49.0, 9.6}, Vec2{149.5, -9.6}, Vec2{12.34, 5.67}}) {
      const Vec2 v = sample_velocity(f, p);
      CHECK(v.x == doctest::Approx(fn(p).x).epsilon(1e-12));
      CHECK(v.y == doctest::Approx(fn(p).y).epsilon(1e-12));
    }
  }
  SUBCASE("uniform field everywhere including the outer half cell")
  {
    const VelocityField f = make_field(spec, place, [](Vec2) { return Vec2{30.0, 0.0}; });
    for (Vec2 p : {Vec2{-50.0, -10.0}, Vec2{150.0, 10.0}, Vec2{0.0, 0.0}}) {
      CHECK(sample_velocity(f, p) == Vec2{30.0, 0.0});
    }
  }
  SUBCASE("outside the extent")
  {
    const VelocityField f(spec, place);
    for (Vec2 p : {Vec2{-50.01, 0.0}, Vec2{150.01, 0.0}, Vec2{0.0, 10.01}, Vec2{0.0, -10.01}}) {
      try {
        (void)sample_velocity(f, p);
        FAIL("expected OutOfField");
      } catch (const Error & e) {
        CHECK(e.code() == ErrorCode::OutOfField);
      }
    }
  }
}

TEST_CASE("streamline in a uniform field")
{
  const GridSpec spec;
  const GridPlacement place{-50.0, -10.0};
  const VelocityField f = make_field(spec, place, [](Vec2) { return Vec2{30.0, 0.0}; });
  const Trajectory t = integrate_streamline(f, {0.0, 0.0}, 0.2, 25);
  REQUIRE(t.size() == 25);
  for (std::size_t k = 0; k < 25; ++k) {
    CHECK(t.points[k].x == doctest::Approx(6.0 * (k + 1)).epsilon(1e-12));
    CHECK(t.points[k].y == 0.0);
  }
  CHECK_FALSE(t.extrapolated);
}

TEST_CASE("streamline leaving the field is extrapolated")
{
  const GridSpec spec;
  const GridPlacement place{-50.0, -10.0};
  const VelocityField f = make_field(spec, place, [](Vec2) { return Vec2{30.0, 1.0}; });
  const Trajectory t = integrate_streamline(f, {100.0, 0.0}, 0.2, 25);
  REQUIRE(t.size() == 25);
  CHECK(t.extrapolated);
  for (std::size_t k = 0; k < 25; ++k) {
    CHECK(t.points[k].x == doctest::Approx(100.0 + 6.0 * (k + 1)));
    CHECK(t.points[k].y == doctest::Approx(0.2 * (k + 1)));
  }
}

TEST_CASE("rigid rotation keeps its radius")
{
  const VelocityField f = make_field(square_spec(), kSquare, rotation);
  const Trajectory t = integrate_streamline(f, {5.0, 0.0}, 0.2, 25);
  for (const Vec2 & p : t.points) CHECK(std::abs(p.norm() - 5.0) / 5.0 < 1e-3);
  // Exact solution after 5 s at 0.5 rad/s.
  CHECK(t.points.back().x == doctest::Approx(5.0 * std::cos(2.5)).epsilon(1e-4));
  CHECK(t.points.back().y == doctest::Approx(5.0 * std::sin(2.5)).epsilon(1e-4));
}

TEST_CASE("integration error shrinks at fourth order")
{
  const VelocityField f = make_field(square_spec(), kSquare, [](Vec2 p) {
    return Vec2{-1.0 * p.y + 0.3 * p.x, 1.0 * p.x};
  });
  // A very fine step serves as reference.
  const Vec2 start{4.0, 1.0};
  const double horizon = 4.0;
  const auto end_point = [&](std::size_t steps) {
    return integrate_streamline(f, start, horizon / static_cast<double>(steps), steps).points.back();
  };
  const Vec2 ref = end_point(4096);
  const double e1 = (end_point(10) - ref).norm();
  const double e2 = (end_point(20) - ref).norm();
  const double e3 = (end_point(40) - ref).norm();
  CHECK(std::log2(e1 / e2) >= 3.5);
  CHECK(std::log2(e2 / e3) >= 3.5);
}

TEST_CASE("prediction from a uniform field is a straight line")
{
  SceneSequence s = lead_sequence(30.0);
  const GridSpec spec;
  const GridPlacement place{-50.0, -8.125};
  const std::vector<VelocityField> fields{make_field(spec, place, [](Vec2) { return Vec2{30.0, 0.0}; })};
  const Trajectory t = predict_streamline(s, fields);
  REQUIRE(t.size() == 25);
  CHECK(t.points[24].x == doctest::Approx(150.0));
  CHECK(t.points[24].y == 0.0);

  StreamlineOptions opts;
  opts.start_offsets = {{0.0, 0.0}, {0.0, 1.0}};
  opts.steps = 5;
  const auto many = predict_streamlines(s, fields, opts);
  REQUIRE(many.size() == 2);
  CHECK(many[1].points[4].y == doctest::Approx(1.0));
  CHECK(many[1].points[4].x == doctest::Approx(30.0));

  CHECK_THROWS_AS((void)predict_streamline(s, {}), Error);
}

TEST_CASE("converged road field")
{
  const auto frames = solve_sequence(lead_sequence(20.0));
  REQUIRE(frames.size() == 1);
  const FrameSolution & sol = frames.front();
  CHECK(sol.converged);
  const VelocityField & f = sol.field;
  const GridSpec & spec = f.spec;

  SUBCASE("walls carry no velocity")
  {
    // Road edges at -1.875 and 5.625 in the target frame, rows 10..21 open.
    for (std::size_t r = 0; r < spec.width_px; ++r) {
      if (r >= 10 && r <= 21) continue;
      for (std::size_t c = 0; c < spec.length_px; ++c) {
        CHECK(f.vx(r, c) == 0.0);
        CHECK(f.vy(r, c) == 0.0);
      }
    }
  }
  SUBCASE("vehicle cells carry their speed")
  {
    const CellIndex a = tv_anchor(spec);
    CHECK(f.vx(a.row - 3, a.col) == doctest::Approx(30.0));
    // Lead centre at x = 20: column 89.
    CHECK(f.vx(a.row - 3, 89) == doctest::Approx(20.0));
  }
  SUBCASE("lateral flow toward the free lane beside the target")
  {
    // Rows 14 and 15 lie between the target (rows 12, 13) and the marking
    // (row 16); columns 67..86 span the gap up to the lead.
    double sum = 0.0;
    int n = 0;
    for (std::size_t r = 14; r <= 15; ++r) {
      for (std::size_t c = 67; c <= 86; ++c) {
        sum += f.vy(r, c);
        ++n;
      }
    }
    CHECK(sum / n > 0.0);
  }
  SUBCASE("streamlines stay on the road")
  {
    for (double y : {-1.5, -0.5, 0.5, 1.875, 3.0, 4.5, 5.3}) {
      const Trajectory t = integrate_streamline(f, {-40.0, y}, 0.2, 25);
      for (const Vec2 & p : t.points) {
        CHECK(p.y > -1.875);
        CHECK(p.y < 5.625);
      }
    }
  }
}
