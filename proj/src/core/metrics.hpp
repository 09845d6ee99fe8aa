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


#ifndef VVFLOW_CORE_METRICS_HPP_
#define VVFLOW_CORE_METRICS_HPP_

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "scene.hpp"

namespace vvflow
{

struct HuberParams
{
  double delta{1.0};
  // Sum of elementwise Huber terms instead of one branch for the whole vector.
  bool per_coordinate{false};
};

/// Huber loss on the stacked 2p-vectors of predicted and true coordinates.
/// Whole-vector mode: 0.5*|d|_2^2 if |d|_1 <= delta, else delta*(|d|_1 - delta/2).
double huber_loss(const Trajectory & pred, const Trajectory & truth, const HuberParams & params = {});
double huber_loss(
  const std::vector<double> & pred, const std::vector<double> & truth, const HuberParams & params = {});

enum class Axis { Longitudinal, Lateral };

/// Root of the mean over samples of the squared displacement error at step
/// `horizon` (1-based).
double rmse_combined(
  const std::vector<Trajectory> & preds, const std::vector<Trajectory> & truths, std::size_t horizon);

/// Same aggregation restricted to one coordinate.
double rmse_axis(
  const std::vector<Trajectory> & preds, const std::vector<Trajectory> & truths, Axis axis,
  std::size_t horizon);

/// Single-sample RMSE averaged over all p steps.
double trajectory_rmse(const Trajectory & pred, const Trajectory & truth);

struct RmseRow
{
  double horizon_s{0.0};
  double rmse_x{0.0};
  double rmse_y{0.0};
  double rmse_r{0.0};
};

struct RmseReport
{
  std::vector<RmseRow> rows;
};

/// Rows at 1 s, 2 s, ... up to the shortest trajectory.
RmseReport make_report(const std::vector<Trajectory> & preds, const std::vector<Trajectory> & truths);

/// CSV with header horizon_s,rmse_x,rmse_y,rmse_r.
void write_report_csv(std::ostream & os, const RmseReport & report);
RmseReport read_report_csv(std::istream & is);

/// CSV with header t_s,x_m,y_m, one row per step.
void write_trajectory_csv(std::ostream & os, const Trajectory & traj);
Trajectory read_trajectory_csv(std::istream & is);

}  // namespace vvflow

#endif  // VVFLOW_CORE_METRICS_HPP_
