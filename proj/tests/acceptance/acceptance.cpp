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


// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flowfield.hpp"
#include "lbm.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "scenario.hpp"
#include "vvf_io.hpp"

namespace fs = std::filesystem;
using namespace vvflow;
using namespace vvflow::lbm;

namespace
{

struct Outcome
{
  bool pass{false};
  std::string detail;
};

int failures = 0;

void run(const char * name, double limit_s, const std::function<Outcome()> & fn)
{
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception & e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0 && s > limit_s) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(limit_s) + " s budget";
  }
  std::printf("%s  %-22s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), s);
  std::fflush(stdout);
  failures += o.pass ? 0 : 1;
}

std::string fmt(const char * f, double a, double b = 0.0, double c = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const fs::path kData = VVFLOW_TEST_DATA_DIR;

Outcome d2q9_algebra()
{
  using D = D2Q9;
  double worst = 0.0;
  double sw = 0.0, swx = 0.0, swy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < kQ; ++i) {
    sw += D::w[i];
    swx += D::w[i] * D::ex[i];
    swy += D::w[i] * D::ey[i];
    sxx += D::w[i] * D::ex[i] * D::ex[i];
    syy += D::w[i] * D::ey[i] * D::ey[i];
    sxy += D::w[i] * D::ex[i] * D::ey[i];
  }
  for (double e : {sw - 1.0, swx, swy, sxx - 1.0 / 3.0, syy - 1.0 / 3.0, sxy}) worst = std::max(worst, std::abs(e));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> rho(0.5, 2.0);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int draw = 0; draw < 1000; ++draw) {
    const double r = rho(rng);
    const Vec2 v{u(rng), u(rng)};
    const Populations eq = equilibrium(r, v);
    double m = 0.0, jx = 0.0, jy = 0.0;
    for (int i = 0; i < kQ; ++i) {
      m += eq[i];
      jx += eq[i] * D::ex[i];
      jy += eq[i] * D::ey[i];
    }
    worst = std::max({worst, std::abs(m - r), std::abs(jx - r * v.x), std::abs(jy - r * v.y)});
  }
  return {worst < 1e-12, fmt("worst identity error %.2e over 1000 draws (limit 1e-12)", worst)};
}

Outcome conservation()
{
  const std::size_t rows = 32, cols = 64;
  BoundaryGrid g;
  g.cells = Grid2D<CellClass>(rows, cols);
  g.periodic_x = g.periodic_y = true;
  LatticeState s(rows, cols);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.01, 0.2);
  for (auto & fi : s.f) fi = d(rng);
  const double m0 = s.total_mass();

  SolverParams p;
  p.relaxation_constant = 1.0 / 6.0;
  double worst_momentum = 0.0;
  for (int it = 0; it < 500; ++it) {
    const LatticeState streamed = stream(s, g);
    s = collide(streamed, p, &g);
    if (it % 50 == 0) {
      for (std::size_t c = 0; c < s.cells(); ++c) {
        double ax = 0.0, ay = 0.0, bx = 0.0, by = 0.0;
        for (int i = 0; i < kQ; ++i) {
          ax += streamed.at(i, c) * D2Q9::ex[i];
          ay += streamed.at(i, c) * D2Q9::ey[i];
          bx += s.at(i, c) * D2Q9::ex[i];
          by += s.at(i, c) * D2Q9::ey[i];
        }
        worst_momentum = std::max({worst_momentum, std::abs(ax - bx), std::abs(ay - by)});
      }
    }
  }
  const double drift = std::abs(s.total_mass() - m0) / m0;
  return {
    drift < 1e-10 && worst_momentum < 1e-12,
    fmt("mass drift %.2e (limit 1e-10), collide momentum error %.2e (limit 1e-12)", drift, worst_momentum)};
}

Outcome poiseuille()
{
  const std::size_t rows = 32, cols = 128;
  const double inlet = 30.0;
  BoundaryGrid g;
  g.spec.width_px = rows;
  g.spec.length_px = cols;
  g.cells = Grid2D<CellClass>(rows, cols);
  g.row_nominal_speed.assign(rows, inlet);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      CellClass & k = g.cells(r, c);
      if (r == 0 || r + 1 == rows) {
        k.kind = CellKind::NoSlipWall;
        g.row_nominal_speed[r] = 0.0;
      } else if (c == 0) {
        k = {CellKind::Inlet, 0.0, {inlet, 0.0}};
      } else if (c + 1 == cols) {
        k.kind = CellKind::Outlet;
      }
    }
  }
  SolverParams p;
  p.relaxation_constant = 1.0 / 6.0;
  p.conv_tol = 1e-4;
  p.max_iters = 50000;
  const UnitScale scale = UnitScale::for_grid(g, p.u_lattice_max);
  const SolveResult res = solve(g, p, scale);

  // Walls sit halfway between the wall rows and the first fluid rows, so the
  // channel spans y in [0.5, rows - 1.5]. The amplitude follows from the
  // inlet flux, not from the measured profile.
  const double y0 = 0.5;
  const double y1 = static_cast<double>(rows) - 1.5;
  double shape_sum = 0.0;
  for (std::size_t r = 1; r + 1 < rows; ++r) shape_sum += (r - y0) * (y1 - r);
  const double amp = inlet * static_cast<double>(rows - 2) / shape_sum;

  double worst = 0.0;
  for (std::size_t c = cols / 2; c + 8 <= cols; ++c) {
    double err = 0.0, ref = 0.0;
    for (std::size_t r = 1; r + 1 < rows; ++r) {
      const double analytic = amp * (r - y0) * (y1 - r);
      const double u = res.state.ux[r * cols + c] / scale.c_u;
      err += (u - analytic) * (u - analytic);
      ref += analytic * analytic;
    }
    worst = std::max(worst, std::sqrt(err / ref));
  }
  return {
    res.converged && worst < 0.05,
    fmt("worst relative L2 %.4f over the downstream half (limit 0.05), %.0f iterations", worst, res.iterations)};
}

SceneSequence scenario(const char * name) { return load_scenario(kData / name); }

Outcome convergence()
{
  std::string detail;
  bool ok = true;
  for (const char * name : {"slow_lead.scn", "same_speed.scn", "slow_lead_h3.scn"}) {
    GenerateOptions opt;
    for (const auto & f : solve_sequence(scenario(name), opt)) {
      ok = ok && f.converged && f.iterations <= 5000 && f.last_delta < 0.01;
      detail += std::string(detail.empty() ? "" : ", ") + name + " " + std::to_string(f.iterations);
    }
  }
  return {ok, "iterations per frame: " + detail + " (limit 5000, |du| < 0.01 m/s)"};
}

Outcome lane_change()
{
  const auto lateral = [](const char * name) {
    const SceneSequence s = scenario(name);
    const auto frames = solve_sequence(s);
    std::vector<VelocityField> fields;
    for (const auto & f : frames) fields.push_back(f.field);
    return predict_streamline(s, fields, 25);
  };
  const Trajectory slow = lateral("slow_lead.scn");
  const Trajectory same = lateral("same_speed.scn");
  double same_max = 0.0;
  for (const auto & q : same.points) same_max = std::max(same_max, std::abs(q.y));
  const double slow_y = slow.points.back().y;
  const bool ok = slow_y > 0.5 && same_max < 1.875;
  return {
    ok, fmt("slow lead: lateral displacement at 5 s %+.3f m (need > 0.5); same speed: max |y| %.3f m (limit 1.875)",
            slow_y, same_max)};
}

Outcome metric_identities()
{
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 4.0);
  double worst_pyth = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Trajectory> preds(9), truths(9);
    for (std::size_t s = 0; s < 9; ++s) {
      for (int j = 0; j < 25; ++j) {
        preds[s].points.push_back({n(rng), n(rng)});
        truths[s].points.push_back({n(rng), n(rng)});
      }
    }
    for (std::size_t j = 1; j <= 25; ++j) {
      const double x = rmse_axis(preds, truths, Axis::Longitudinal, j);
      const double y = rmse_axis(preds, truths, Axis::Lateral, j);
      const double r = rmse_combined(preds, truths, j);
      worst_pyth = std::max(worst_pyth, std::abs(x * x + y * y - r * r));
    }
  }

  Trajectory zero;
  zero.points.assign(25, Vec2{});
  Trajectory small = zero;
  small.points[4].y = 0.6;
  Trajectory large = zero;
  large.points[4].x = 3.0;
  const double h_small = huber_loss(small, zero);
  const double h_large = huber_loss(large, zero);

  const std::vector<double> z{0.0, 0.0};
  const double below = huber_loss(std::vector<double>{1.0 - 1e-12, 0.0}, z);
  const double above = huber_loss(std::vector<double>{1.0 + 1e-12, 0.0}, z);
  const double jump = std::abs(above - below);

  const bool ok = worst_pyth < 1e-9 && std::abs(h_small - 0.18) < 1e-12 && std::abs(h_large - 2.5) < 1e-12 &&
                  jump < 1e-9;
  std::ostringstream os;
  os << "|x^2+y^2-r^2| max " << worst_pyth << ", huber " << h_small << " and " << h_large
     << ", jump at delta " << jump;
  return {ok, os.str()};
}

Outcome tensors()
{
  const std::uint32_t h = 10;
  VvfVolume v{3, 256, 32, h, {}};
  v.data.resize(v.expected_size());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> d(-40.0f, 40.0f);
  for (std::size_t f = 0; f < h; ++f) {
    for (std::size_t i = 0; i < 32 * 256; ++i) {
      v.data[v.index(f, 0, 0, 0) + i] = static_cast<float>(rng() % 3);
      v.data[v.index(f, 1, 0, 0) + i] = d(rng);
      v.data[v.index(f, 2, 0, 0) + i] = d(rng);
    }
  }
  const TensorStack s = build_tensor_stack(v);
  const bool shapes = s.initial_shape() == Shape3{10, 96, 256} && s.reconstructed_shape() == Shape3{3, 320, 256};
  std::vector<float> a = s.initial, b = s.reconstructed;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const bool perm = a == b;

  std::stringstream ss;
  write_vvf(ss, v);
  const std::string bytes = ss.str();
  const VvfVolume back = read_vvf(ss);
  std::stringstream again;
  write_vvf(again, back);
  const bool exact = again.str() == bytes &&
                     std::equal(back.data.begin(), back.data.end(), v.data.begin(), [](float x, float y) {
                       return std::bit_cast<std::uint32_t>(x) == std::bit_cast<std::uint32_t>(y);
                     });
  std::ostringstream os;
  os << "initial (" << s.initial_shape()[0] << ", " << s.initial_shape()[1] << ", " << s.initial_shape()[2]
     << "), reconstructed (" << s.reconstructed_shape()[0] << ", " << s.reconstructed_shape()[1] << ", "
     << s.reconstructed_shape()[2] << "), permutation " << (perm ? "equal" : "differs") << ", round trip "
     << (exact ? "bit-exact" : "differs");
  return {shapes && perm && exact, os.str()};
}

Outcome throughput()
{
  (void)bench(64, 256, 10);
  const BenchResult r = bench(64, 256, 100, TauMode::ViscosityDerived, 1);
  return {
    r.mlups >= 1.0,
    fmt("256x64, 100 updates: %.1f ms, %.1f MLUPS single-threaded (limit 1); reference GPU time 4.4 ms",
        r.seconds * 1e3, r.mlups)};
}

std::string slurp(const fs::path & p)
{
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

Outcome determinism()
{
  const fs::path dir = fs::temp_directory_path() / "vvflow_acceptance";
  fs::create_directories(dir);
  const std::string scn = (kData / "slow_lead_h3.scn").string();
  std::vector<std::string> outputs;
  for (const char * jobs : {"1", "1", "4"}) {
    const fs::path out = dir / (std::string("det_") + std::to_string(outputs.size()) + ".vvf");
    const std::string cmd = std::string("\"") + VVF_CLI_PATH + "\" vvf --scenario \"" + scn + "\" --out \"" +
                            out.string() + "\" --jobs " + jobs + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "vvf exited with an error: " + cmd};
    outputs.push_back(slurp(out));
  }
  const bool ok = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
  return {ok, "three runs (--jobs 1, 1, 4) of " + std::to_string(outputs[0].size()) + " bytes " +
                (ok ? "identical" : "differ")};
}

}  // namespace

int main()
{
  run("d2q9_algebra", 1.0, d2q9_algebra);
  run("conservation", 10.0, conservation);
  run("poiseuille", 30.0, poiseuille);
  run("convergence", 0.0, convergence);
  run("lane_change_response", 0.0, lane_change);
  run("metrics_identities", 0.0, metric_identities);
  run("tensor_shapes", 0.0, tensors);
  run("throughput", 0.0, throughput);
  run("determinism", 0.0, determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
