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


#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "csv.hpp"
#include "error.hpp"

namespace vvflow
{

namespace
{

std::vector<double> stacked(const Trajectory & t)
{
  std::vector<double> z;
  z.reserve(2 * t.size());
  for (const auto & p : t.points) z.push_back(p.x);
  for (const auto & p : t.points) z.push_back(p.y);
  return z;
}

void check_aligned(
  const std::vector<Trajectory> & preds, const std::vector<Trajectory> & truths, std::size_t horizon)
{
  if (preds.empty()) fail(ErrorCode::EmptySet, "no trajectories to evaluate");
  if (preds.size() != truths.size()) {
    fail(ErrorCode::LengthMismatch, "prediction and truth counts differ");
  }
  if (horizon == 0) fail(ErrorCode::InvalidArgument, "horizon index is 1-based");
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].size() < horizon || truths[i].size() < horizon) {
      fail(
        ErrorCode::LengthMismatch,
        "sample " + std::to_string(i) + " is shorter than horizon " + std::to_string(horizon));
    }
  }
}

double mean_square(
  const std::vector<Trajectory> & preds, const std::vector<Trajectory> & truths, std::size_t horizon,
  double wx, double wy)
{
  check_aligned(preds, truths, horizon);
  double acc = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const Vec2 d = preds[i].points[horizon - 1] - truths[i].points[horizon - 1];
    acc += wx * d.x * d.x + wy * d.y * d.y;
  }
  return acc / static_cast<double>(preds.size());
}

std::string fmt(double v)
{
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

double huber_loss(
  const std::vector<double> & pred, const std::vector<double> & truth, const HuberParams & params)
{
  if (pred.size() != truth.size()) fail(ErrorCode::LengthMismatch, "vectors differ in length");
  if (!(params.delta > 0.0)) fail(ErrorCode::InvalidArgument, "huber delta must be > 0");
  const double delta = params.delta;
  if (params.per_coordinate) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double a = std::abs(pred[i] - truth[i]);
      sum += a <= delta ? 0.5 * a * a : delta * (a - 0.5 * delta);
    }
    return sum;
  }
  double l1 = 0.0;
  double l2sq = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    l1 += std::abs(d);
    l2sq += d * d;
  }
  return l1 <= delta ? 0.5 * l2sq : delta * (l1 - 0.5 * delta);
}

double huber_loss(const Trajectory & pred, const Trajectory & truth, const HuberParams & params)
{
  if (pred.size() != truth.size()) fail(ErrorCode::LengthMismatch, "trajectories differ in length");
  return huber_loss(stacked(pred), stacked(truth), params);
}

double rmse_combined(
  const std::vector<Trajectory> & preds, const std::vector<Trajectory> & truths, std::size_t horizon)
{
  return std::sqrt(mean_square(preds, truths, horizon, 1.0, 1.0));
}

double rmse_axis(
  const std::vector<Trajectory> & preds, const std::vector<Trajectory> & truths, Axis axis,
  std::size_t horizon)
{
  const bool lon = axis == Axis::Longitudinal;
  return std::sqrt(mean_square(preds, truths, horizon, lon ? 1.0 : 0.0, lon ? 0.0 : 1.0));
}

double trajectory_rmse(const Trajectory & pred, const Trajectory & truth)
{
  if (pred.size() != truth.size()) fail(ErrorCode::LengthMismatch, "trajectories differ in length");
  if (pred.size() == 0) fail(ErrorCode::EmptySet, "empty trajectory");
  double acc = 0.0;
  for (std::size_t j = 0; j < pred.size(); ++j) {
    const Vec2 d = pred.points[j] - truth.points[j];
    acc += d.x * d.x + d.y * d.y;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

RmseReport make_report(const std::vector<Trajectory> & preds, const std::vector<Trajectory> & truths)
{
  check_aligned(preds, truths, 1);
  std::size_t shortest = preds.front().size();
  double dt = preds.front().dt;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    shortest = std::min({shortest, preds[i].size(), truths[i].size()});
  }
  const auto per_second = static_cast<std::size_t>(std::lround(1.0 / dt));
  RmseReport report;
  for (std::size_t j = per_second; j <= shortest && per_second > 0; j += per_second) {
    RmseRow row;
    row.horizon_s = static_cast<double>(j) * dt;
    row.rmse_x = rmse_axis(preds, truths, Axis::Longitudinal, j);
    row.rmse_y = rmse_axis(preds, truths, Axis::Lateral, j);
    row.rmse_r = rmse_combined(preds, truths, j);
    report.rows.push_back(row);
  }
  return report;
}

void write_report_csv(std::ostream & os, const RmseReport & report)
{
  os << "horizon_s,rmse_x,rmse_y,rmse_r\n";
  for (const auto & r : report.rows) {
    os << fmt(r.horizon_s) << ',' << fmt(r.rmse_x) << ',' << fmt(r.rmse_y) << ',' << fmt(r.rmse_r)
       << '\n';
  }
}

RmseReport read_report_csv(std::istream & is)
{
  const CsvTable table = read_csv(is);
  const auto h = table.column("horizon_s");
  const auto x = table.column("rmse_x");
  const auto y = table.column("rmse_y");
  const auto r = table.column("rmse_r");
  RmseReport report;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    report.rows.push_back(
      {table.number(i, h), table.number(i, x), table.number(i, y), table.number(i, r)});
  }
  return report;
}

void write_trajectory_csv(std::ostream & os, const Trajectory & traj)
{
  os << "t_s,x_m,y_m\n";
  for (std::size_t j = 0; j < traj.size(); ++j) {
    os << fmt(static_cast<double>(j + 1) * traj.dt) << ',' << fmt(traj.points[j].x) << ','
       << fmt(traj.points[j].y) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream & is)
{
  const CsvTable table = read_csv(is);
  const auto t = table.column("t_s");
  const auto x = table.column("x_m");
  const auto y = table.column("y_m");
  Trajectory traj;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    traj.points.push_back({table.number(i, x), table.number(i, y)});
  }
  if (table.rows.size() >= 2) {
    traj.dt = table.number(1, t) - table.number(0, t);
  } else if (table.rows.size() == 1) {
    traj.dt = table.number(0, t);
  }
  if (!(traj.dt > 0.0)) fail(ErrorCode::Format, "trajectory time column must increase");
  return traj;
}

}  // namespace vvflow
