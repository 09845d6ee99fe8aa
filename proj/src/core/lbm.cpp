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

#include "lbm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "error.hpp"

namespace vvflow::lbm
{
namespace
{

using D = D2Q9;

inline constexpr double kBlowupLimit = 1e6;

// Per-link streaming rule: f_i(c) <- t * f_i(src) + (1 - t) * f_rdir(rsrc).
// t = 1 is free streaming, t = 0 full reflection, anything else porous.
struct Link
{
  std::uint32_t src{0};
  std::uint32_t rsrc{0};
  std::uint8_t rdir{0};
  double t{1.0};
};

// Direction with the lateral component flipped.
inline constexpr std::array<std::uint8_t, kQ> kMirrorY{0, 1, 8, 7, 6, 5, 4, 3, 2};

class Kernel
{
public:
  Kernel(const BoundaryGrid & grid, int jobs, PorousReflection porous = PorousReflection::BounceBack)
  : grid_(grid), jobs_(std::max(1, jobs)), porous_(porous)
  {
    rows_ = grid.cells.rows();
    cols_ = grid.cells.cols();
    const std::size_t n = rows_ * cols_;
    kind_.resize(n);
    for (std::size_t c = 0; c < n; ++c) kind_[c] = grid.cells[c].kind;
    links_.resize(static_cast<std::size_t>(kQ) * n);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t col = 0; col < cols_; ++col) {
        for (int i = 0; i < kQ; ++i) links_[i * n + r * cols_ + col] = make_link(r, col, i);
      }
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void check_dims(const LatticeState & s) const
  {
    if (s.rows != rows_ || s.cols != cols_) {
      fail(ErrorCode::ShapeMismatch, "lattice state and boundary grid dimensions differ");
    }
  }

  void stream(const LatticeState & src, LatticeState & dst) const
  {
    const std::size_t n = rows_ * cols_;
    const double * in = src.f.data();
    double * out = dst.f.data();
#pragma omp parallel for num_threads(jobs_) schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows_); ++r) {
      for (std::size_t col = 0; col < cols_; ++col) {
        const std::size_t c = static_cast<std::size_t>(r) * cols_ + col;
        if (kind_[c] == CellKind::NoSlipWall) {
          for (int i = 0; i < kQ; ++i) out[i * n + c] = 0.0;
          continue;
        }
        for (int i = 0; i < kQ; ++i) {
          const Link & l = links_[i * n + c];
          if (l.t == 1.0) {
            out[i * n + c] = in[i * n + l.src];
          } else if (l.t == 0.0) {
            out[i * n + c] = in[l.rdir * n + l.rsrc];
          } else {
            out[i * n + c] = l.t * in[i * n + l.src] + (1.0 - l.t) * in[l.rdir * n + l.rsrc];
          }
        }
      }
    }
    // Outlet: upstream velocity and non-equilibrium part, density pinned to 1.
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t col = 1; col < cols_; ++col) {
        const std::size_t c = r * cols_ + col;
        if (kind_[c] != CellKind::Outlet) continue;
        double rho = 0.0;
        double jx = 0.0;
        double jy = 0.0;
        for (int i = 0; i < kQ; ++i) {
          const double fi = out[i * n + c - 1];
          rho += fi;
          jx += fi * D::ex[i];
          jy += fi * D::ey[i];
        }
        const Vec2 u = rho > 0.0 ? Vec2{jx / rho, jy / rho} : Vec2{};
        const Populations eq = equilibrium(1.0, u);
        const Populations equp = equilibrium(rho, u);
        for (int i = 0; i < kQ; ++i) out[i * n + c] = eq[i] + (out[i * n + c - 1] - equp[i]);
      }
    }
  }

  struct CollideStats
  {
    double max_du{0.0};
    bool blowup{false};
  };

  // In-place BGK. `prev` supplies the previous velocities for the change
  // measurement, taken over cells that are neither walls nor Dirichlet.
  CollideStats collide(LatticeState & s, double tau, const LatticeState * prev) const
  {
    const std::size_t n = rows_ * cols_;
    const double omega = 1.0 / tau;
    double max_du = 0.0;
    bool blowup = false;
    double * f = s.f.data();
#pragma omp parallel for num_threads(jobs_) schedule(static) reduction(max : max_du) \
  reduction(|| : blowup)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows_); ++r) {
      for (std::size_t col = 0; col < cols_; ++col) {
        const std::size_t c = static_cast<std::size_t>(r) * cols_ + col;
        const CellKind kind = kind_[c];
        if (kind == CellKind::NoSlipWall) {
          s.rho[c] = 0.0;
          s.ux[c] = 0.0;
          s.uy[c] = 0.0;
          continue;
        }
        double rho = 0.0;
        double jx = 0.0;
        double jy = 0.0;
        for (int i = 0; i < kQ; ++i) {
          const double fi = f[i * n + c];
          rho += fi;
          jx += fi * D::ex[i];
          jy += fi * D::ey[i];
        }
        if (!(rho > 0.0)) {
          blowup = true;
          continue;
        }
        const double ux = jx / rho;
        const double uy = jy / rho;
        const Populations eq = equilibrium(rho, {ux, uy});
        for (int i = 0; i < kQ; ++i) {
          double & fi = f[i * n + c];
          fi += omega * (eq[i] - fi);
          if (!(std::abs(fi) <= kBlowupLimit)) blowup = true;
        }
        if (prev != nullptr && kind != CellKind::VehicleDirichlet && kind != CellKind::Inlet) {
          max_du = std::max(max_du, std::hypot(ux - prev->ux[c], uy - prev->uy[c]));
        }
        s.rho[c] = rho;
        s.ux[c] = ux;
        s.uy[c] = uy;
      }
    }
    return {max_du, blowup};
  }

  void impose(LatticeState & s, const UnitScale & scale) const
  {
    const std::size_t n = rows_ * cols_;
    for (std::size_t c = 0; c < n; ++c) {
      const CellClass & cell = grid_.cells[c];
      if (cell.kind == CellKind::NoSlipWall) {
        s.ux[c] = 0.0;
        s.uy[c] = 0.0;
        continue;
      }
      if (!cell.is_dirichlet()) continue;
      double rho = 0.0;
      for (int i = 0; i < kQ; ++i) rho += s.f[i * n + c];
      const Vec2 u = scale.to_lattice(cell.velocity);
      const Populations eq = equilibrium(rho, u);
      for (int i = 0; i < kQ; ++i) s.f[i * n + c] = eq[i];
      s.rho[c] = rho;
      s.ux[c] = u.x;
      s.uy[c] = u.y;
    }
  }

private:
  std::optional<std::size_t> neighbour(std::size_t r, std::size_t col, int dx, int dy, bool & open_x) const
  {
    open_x = false;
    auto sc = static_cast<std::ptrdiff_t>(col) + dx;
    auto sr = static_cast<std::ptrdiff_t>(r) + dy;
    const auto wrap = [](std::ptrdiff_t v, std::size_t n) {
      const auto m = static_cast<std::ptrdiff_t>(n);
      return ((v % m) + m) % m;
    };
    if (sc < 0 || sc >= static_cast<std::ptrdiff_t>(cols_)) {
      if (!grid_.periodic_x) {
        open_x = true;
        return std::nullopt;
      }
      sc = wrap(sc, cols_);
    }
    if (sr < 0 || sr >= static_cast<std::ptrdiff_t>(rows_)) {
      if (!grid_.periodic_y) return std::nullopt;
      sr = wrap(sr, rows_);
    }
    return static_cast<std::size_t>(sr) * cols_ + static_cast<std::size_t>(sc);
  }

  Link make_link(std::size_t r, std::size_t col, int i) const
  {
    const auto here = static_cast<std::uint32_t>(r * cols_ + col);
    const Link bounce{here, here, static_cast<std::uint8_t>(D::opposite[i]), 0.0};
    bool open_x = false;
    const auto src = neighbour(r, col, -D::ex[i], -D::ey[i], open_x);
    if (!src) {
      // Open longitudinal ends keep their own pre-stream value; anything
      // beyond the lateral ends is solid.
      return open_x ? Link{here, here, static_cast<std::uint8_t>(i), 1.0} : bounce;
    }
    const CellClass & from = grid_.cells[*src];
    const CellClass & to = grid_.cells[here];
    if (from.kind == CellKind::NoSlipWall) return bounce;
    const bool porous_from = from.kind == CellKind::PorousMarking;
    const bool porous_to = to.kind == CellKind::PorousMarking;
    if (porous_from == porous_to) return {static_cast<std::uint32_t>(*src), here, 0, 1.0};

    const double beta = porous_from ? from.beta : to.beta;
    Link link = bounce;
    link.src = static_cast<std::uint32_t>(*src);
    link.t = 1.0 - beta;
    if (porous_ == PorousReflection::Specular && D::ey[i] != 0) {
      // The reflected share arrives from the same-side cell one step back
      // along x, travelling with its lateral component flipped.
      bool unused = false;
      const auto side = neighbour(r, col, -D::ex[i], 0, unused);
      if (side && grid_.cells[*side].kind != CellKind::NoSlipWall &&
          (grid_.cells[*side].kind == CellKind::PorousMarking) == porous_to) {
        link.rsrc = static_cast<std::uint32_t>(*side);
        link.rdir = kMirrorY[i];
      }
    }
    return link;
  }

  const BoundaryGrid & grid_;
  int jobs_;
  PorousReflection porous_;
  std::size_t rows_{0};
  std::size_t cols_{0};
  std::vector<CellKind> kind_;
  std::vector<Link> links_;
};

BoundaryGrid all_fluid(const LatticeState & s)
{
  BoundaryGrid g;
  g.cells = Grid2D<CellClass>(s.rows, s.cols);
  g.periodic_x = true;
  g.periodic_y = true;
  return g;
}

}  // namespace

Populations equilibrium(double rho, Vec2 u)
{
  Populations eq{};
  const double usq = 1.5 * (u.x * u.x + u.y * u.y);
  for (int i = 0; i < kQ; ++i) {
    const double eu = D::ex[i] * u.x + D::ey[i] * u.y;
    eq[i] = D::w[i] * rho * (1.0 + 3.0 * eu - usq + 4.5 * eu * eu);
  }
  return eq;
}

LatticeState::LatticeState(std::size_t rows_, std::size_t cols_)
: rows(rows_),
  cols(cols_),
  f(static_cast<std::size_t>(kQ) * rows_ * cols_, 0.0),
  rho(rows_ * cols_, 0.0),
  ux(rows_ * cols_, 0.0),
  uy(rows_ * cols_, 0.0)
{
}

Populations LatticeState::populations(std::size_t cell) const
{
  Populations p{};
  for (int i = 0; i < kQ; ++i) p[i] = at(i, cell);
  return p;
}

void LatticeState::set_populations(std::size_t cell, const Populations & p)
{
  for (int i = 0; i < kQ; ++i) at(i, cell) = p[i];
}

void LatticeState::update_moments(std::size_t cell)
{
  double m = 0.0;
  double jx = 0.0;
  double jy = 0.0;
  for (int i = 0; i < kQ; ++i) {
    const double fi = at(i, cell);
    m += fi;
    jx += fi * D::ex[i];
    jy += fi * D::ey[i];
  }
  rho[cell] = m;
  ux[cell] = m > 0.0 ? jx / m : 0.0;
  uy[cell] = m > 0.0 ? jy / m : 0.0;
}

double LatticeState::total_mass() const
{
  double m = 0.0;
  for (double fi : f) m += fi;
  return m;
}

double SolverParams::tau() const
{
  return tau_mode == TauMode::ViscosityDerived ? 3.0 * relaxation_constant + 0.5
                                               : relaxation_constant;
}

void SolverParams::validate() const
{
  if (!(relaxation_constant > 0.0)) fail(ErrorCode::InvalidArgument, "relaxation constant must be > 0");
  if (!(tau() > 0.0)) fail(ErrorCode::InvalidArgument, "tau must be > 0");
  if (!(conv_tol > 0.0)) fail(ErrorCode::InvalidArgument, "conv_tol must be > 0");
  if (!(u_lattice_max > 0.0)) fail(ErrorCode::InvalidArgument, "u_lattice_max must be > 0");
  if (max_iters < 1) fail(ErrorCode::InvalidArgument, "max_iters must be >= 1");
}

UnitScale UnitScale::for_grid(const BoundaryGrid & grid, double u_lattice_max)
{
  double top = grid.max_imposed_speed();
  for (double s : grid.row_nominal_speed) top = std::max(top, std::abs(s));
  return {u_lattice_max / std::max(top, 1.0)};
}

LatticeState initial_state(const BoundaryGrid & grid, const UnitScale & scale)
{
  const std::size_t rows = grid.cells.rows();
  const std::size_t cols = grid.cells.cols();
  LatticeState s(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double nominal = r < grid.row_nominal_speed.size() ? grid.row_nominal_speed[r] : 0.0;
    for (std::size_t col = 0; col < cols; ++col) {
      const std::size_t c = r * cols + col;
      const CellClass & cell = grid.cells[c];
      if (cell.kind == CellKind::NoSlipWall) continue;
      const Vec2 u = scale.to_lattice(cell.is_dirichlet() ? cell.velocity : Vec2{nominal, 0.0});
      s.set_populations(c, equilibrium(1.0, u));
      s.rho[c] = 1.0;
      s.ux[c] = u.x;
      s.uy[c] = u.y;
    }
  }
  return s;
}

LatticeState stream(const LatticeState & state, const BoundaryGrid & grid)
{
  const Kernel k(grid, 1);
  k.check_dims(state);
  LatticeState out = state;
  k.stream(state, out);
  return out;
}

LatticeState collide(const LatticeState & state, const SolverParams & params, const BoundaryGrid * grid)
{
  if (!(params.tau() > 0.0)) fail(ErrorCode::InvalidArgument, "tau must be > 0");
  const BoundaryGrid fluid = grid == nullptr ? all_fluid(state) : BoundaryGrid{};
  const Kernel k(grid == nullptr ? fluid : *grid, 1);
  k.check_dims(state);
  LatticeState out = state;
  k.collide(out, params.tau(), nullptr);
  return out;
}

LatticeState impose_boundaries(
  const LatticeState & state, const BoundaryGrid & grid, const UnitScale & scale)
{
  const Kernel k(grid, 1);
  k.check_dims(state);
  LatticeState out = state;
  k.impose(out, scale);
  return out;
}

SolveResult solve(
  const BoundaryGrid & grid, const SolverParams & params, const UnitScale & scale,
  const std::optional<LatticeState> & init)
{
  params.validate();
  if (!(scale.c_u > 0.0)) fail(ErrorCode::InvalidArgument, "velocity scale must be > 0");
  const Kernel k(grid, params.jobs, params.porous_reflection);

  SolveResult result;
  LatticeState cur = init ? *init : initial_state(grid, scale);
  k.check_dims(cur);
  LatticeState next = cur;
  const double tau = params.tau();
  const double tol_lattice = params.conv_tol * scale.c_u;

  for (int it = 1; it <= params.max_iters; ++it) {
    k.impose(cur, scale);
    k.stream(cur, next);
    const auto stats = k.collide(next, tau, &cur);
    std::swap(cur, next);
    result.iterations = it;
    result.last_delta = stats.max_du / scale.c_u;
    if (stats.blowup) {
      fail(
        ErrorCode::NumericalBlowup,
        "lattice densities diverged after " + std::to_string(it) + " iterations (tau = " +
          std::to_string(tau) + ")");
    }
    if (stats.max_du < tol_lattice) {
      result.converged = true;
      break;
    }
  }
  k.impose(cur, scale);
  result.state = std::move(cur);
  return result;
}

BenchResult bench(std::size_t rows, std::size_t cols, int iterations, TauMode mode, int jobs)
{
  if (rows < 16 || cols < 16) fail(ErrorCode::InvalidArgument, "bench needs at least 16x16 cells");
  if (iterations < 1) fail(ErrorCode::InvalidArgument, "bench needs at least one iteration");

  BoundaryGrid grid;
  grid.spec.width_px = rows;
  grid.spec.length_px = cols;
  grid.cells = Grid2D<CellClass>(rows, cols);
  grid.row_nominal_speed.assign(rows, 30.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      CellClass & cell = grid.cells(r, c);
      if (r == 0 || r + 1 == rows) {
        cell.kind = CellKind::NoSlipWall;
      } else if (c == 0) {
        cell = {CellKind::Inlet, 0.0, {30.0, 0.0}};
      } else if (c + 1 == cols) {
        cell.kind = CellKind::Outlet;
      }
    }
  }

  SolverParams params;
  params.tau_mode = mode;
  params.jobs = jobs;
  const UnitScale scale = UnitScale::for_grid(grid, params.u_lattice_max);
  const Kernel k(grid, jobs);
  LatticeState cur = initial_state(grid, scale);
  LatticeState next = cur;
  const double tau = params.tau();

  const auto start = std::chrono::steady_clock::now();
  for (int it = 0; it < iterations; ++it) {
    k.impose(cur, scale);
    k.stream(cur, next);
    k.collide(next, tau, &cur);
    std::swap(cur, next);
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  BenchResult out;
  out.cells = rows * cols;
  out.iterations = iterations;
  out.seconds = elapsed.count();
  out.mlups = static_cast<double>(out.cells) * iterations / std::max(out.seconds, 1e-12) / 1e6;
  return out;
}

}  // namespace vvflow::lbm
