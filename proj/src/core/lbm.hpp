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

#ifndef VVFLOW_CORE_LBM_HPP_
#define VVFLOW_CORE_LBM_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "raster.hpp"
#include "scene.hpp"

namespace vvflow::lbm
{

inline constexpr int kQ = 9;

/// D2Q9 velocity set. Index 0 is at rest, odd indices are axis-aligned and
/// even indices diagonal, counter-clockwise from +x.
struct D2Q9
{
  static constexpr std::array<int, kQ> ex{0, 1, 1, 0, -1, -1, -1, 0, 1};
  static constexpr std::array<int, kQ> ey{0, 0, 1, 1, 1, 0, -1, -1, -1};
  static constexpr std::array<double, kQ> w{
    4.0 / 9.0,  1.0 / 9.0, 1.0 / 36.0, 1.0 / 9.0, 1.0 / 36.0,
    1.0 / 9.0, 1.0 / 36.0, 1.0 / 9.0, 1.0 / 36.0};
  static constexpr std::array<int, kQ> opposite{0, 5, 6, 7, 8, 1, 2, 3, 4};
};

using Populations = std::array<double, kQ>;

/// BGK equilibrium, second order in u.
Populations equilibrium(double rho, Vec2 u);

/// Nine densities per cell stored direction-major (f[i * cells + cell]) plus
/// the macroscopic density and velocity in lattice units.
struct LatticeState
{
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<double> f;
  std::vector<double> rho;
  std::vector<double> ux;
  std::vector<double> uy;

  LatticeState() = default;
  LatticeState(std::size_t rows_, std::size_t cols_);

  std::size_t cells() const { return rows * cols; }
  double & at(int i, std::size_t cell) { return f[static_cast<std::size_t>(i) * cells() + cell]; }
  double at(int i, std::size_t cell) const { return f[static_cast<std::size_t>(i) * cells() + cell]; }
  Populations populations(std::size_t cell) const;
  void set_populations(std::size_t cell, const Populations & p);
  /// Recomputes rho and u of one cell from its densities.
  void update_moments(std::size_t cell);
  double total_mass() const;

  friend bool operator==(const LatticeState &, const LatticeState &) = default;
};

enum class TauMode {
  // tau = 3 * nu + 1/2 with nu the configured constant.
  ViscosityDerived,
  // The configured constant is used directly as the relaxation time.
  Literal,
};

enum class PorousReflection {
  // The reflected share of a crossing density returns the way it came.
  BounceBack,
  // Only the lateral component of the reflected share is reversed.
  Specular,
};

struct SolverParams
{
  TauMode tau_mode{TauMode::ViscosityDerived};
  double relaxation_constant{0.003};
  double u_lattice_max{0.02};
  // Convergence threshold on the per-iteration velocity change, m/s.
  double conv_tol{0.01};
  int max_iters{5000};
  // Start each frame of a sequence from the previous solution.
  bool warm_start{false};
  // Worker threads for stream and collide; results do not depend on it.
  int jobs{1};
  PorousReflection porous_reflection{PorousReflection::BounceBack};

  double tau() const;
  void validate() const;
};

/// Lattice velocity per physical velocity, (lattice units) / (m/s).
struct UnitScale
{
  double c_u{1.0};

  /// Maps the fastest imposed speed in the grid to u_lattice_max. Grids with
  /// nothing faster than 1 m/s are scaled as if their top speed were 1 m/s.
  static UnitScale for_grid(const BoundaryGrid & grid, double u_lattice_max);

  Vec2 to_lattice(Vec2 v) const { return c_u * v; }
  Vec2 to_physical(Vec2 u) const { return (1.0 / c_u) * u; }
};

/// Equilibrium at rho = 1 and each row's nominal speed; Dirichlet cells start
/// at their imposed velocity and walls are empty.
LatticeState initial_state(const BoundaryGrid & grid, const UnitScale & scale);

/// Pull streaming into a fresh buffer. Links into walls bounce back, links
/// crossing a porous cell boundary reflect beta of the density. Outlet cells
/// take the upstream neighbour's velocity and non-equilibrium part at unit
/// density.
LatticeState stream(const LatticeState & state, const BoundaryGrid & grid);

/// BGK relaxation on every non-wall cell of `grid`; with no grid every cell
/// is fluid.
LatticeState collide(
  const LatticeState & state, const SolverParams & params, const BoundaryGrid * grid = nullptr);

/// Dirichlet cells get the equilibrium at their local density and imposed
/// velocity; wall cells report zero velocity.
LatticeState impose_boundaries(
  const LatticeState & state, const BoundaryGrid & grid, const UnitScale & scale);

struct SolveResult
{
  LatticeState state;
  int iterations{0};
  bool converged{false};
  // Last measured max-over-cells velocity change, m/s.
  double last_delta{0.0};
};

/// Iterates impose, stream, collide until the largest per-iteration velocity
/// change over free cells drops below conv_tol. Throws NumericalBlowup on
/// non-finite or runaway densities.
SolveResult solve(
  const BoundaryGrid & grid, const SolverParams & params, const UnitScale & scale,
  const std::optional<LatticeState> & init = std::nullopt);

struct BenchResult
{
  std::size_t cells{0};
  int iterations{0};
  double seconds{0.0};
  double mlups{0.0};
};

/// Times the solver loop body on a walled channel of rows x cols cells.
BenchResult bench(
  std::size_t rows, std::size_t cols, int iterations, TauMode mode = TauMode::ViscosityDerived,
  int jobs = 1);

}  // namespace vvflow::lbm

#endif  // VVFLOW_CORE_LBM_HPP_
