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


#include "vvflow/vvflow.h"

#include <exception>
#include <filesystem>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "error.hpp"
#include "flowfield.hpp"
#include "highd.hpp"
#include "lbm.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "scenario.hpp"
#include "vvf_io.hpp"

struct vvf_sequence
{
  vvflow::SceneSequence value;
};
struct vvf_volume
{
  vvflow::VvfVolume value;
};
struct vvf_trajectory
{
  vvflow::Trajectory value;
};
struct vvf_report
{
  vvflow::RmseReport value;
};

namespace
{

thread_local std::string g_last_error;

vvf_status set_error(vvf_status status, const std::string & what)
{
  g_last_error = what;
  return status;
}

template <typename F>
vvf_status guarded(F && body)
{
  try {
    g_last_error.clear();
    body();
    return VVF_OK;
  } catch (const vvflow::Error & e) {
    return set_error(static_cast<vvf_status>(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return set_error(VVF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception & e) {
    return set_error(VVF_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char * what)
{
  if (!ok) vvflow::fail(vvflow::ErrorCode::InvalidArgument, what);
}

vvflow::GenerateOptions to_generate(const vvf_solve_options & o)
{
  vvflow::GenerateOptions g;
  require(o.tau_mode == VVF_TAU_VISCOSITY || o.tau_mode == VVF_TAU_LITERAL, "unknown tau mode");
  g.solver.tau_mode =
    o.tau_mode == VVF_TAU_LITERAL ? vvflow::lbm::TauMode::Literal : vvflow::lbm::TauMode::ViscosityDerived;
  g.solver.relaxation_constant = o.relaxation_constant;
  g.solver.u_lattice_max = o.u_lattice_max;
  g.solver.conv_tol = o.conv_tol;
  g.solver.max_iters = o.max_iters;
  g.solver.warm_start = o.warm_start != 0;
  g.solver.jobs = o.jobs;
  g.beta = o.beta;
  return g;
}

}  // namespace

extern "C" {

const char * vvf_version(void) { return VVFLOW_VERSION; }

const char * vvf_last_error(void) { return g_last_error.c_str(); }

const char * vvf_status_name(vvf_status status)
{
  switch (status) {
    case VVF_OK:
      return "ok";
    case VVF_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case VVF_ERR_IO:
      return "i/o error";
    case VVF_ERR_FORMAT:
      return "format error";
    case VVF_ERR_MISSING_COLUMN:
      return "missing column";
    case VVF_ERR_CORRUPT_FILE:
      return "corrupt file";
    case VVF_ERR_SHAPE_MISMATCH:
      return "shape mismatch";
    case VVF_ERR_LENGTH_MISMATCH:
      return "length mismatch";
    case VVF_ERR_EMPTY_SET:
      return "empty set";
    case VVF_ERR_MISSING_TARGET_VEHICLE:
      return "missing target vehicle";
    case VVF_ERR_LAYOUT_OUT_OF_GRID:
      return "layout out of grid";
    case VVF_ERR_NUMERICAL_BLOWUP:
      return "numerical blow-up";
    case VVF_ERR_INCOMPATIBLE_FRAME_RATE:
      return "incompatible frame rate";
    case VVF_ERR_OUT_OF_FIELD:
      return "out of field";
    case VVF_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void vvf_solve_options_default(vvf_solve_options * options)
{
  if (options == nullptr) return;
  const vvflow::GenerateOptions g;
  options->tau_mode =
    g.solver.tau_mode == vvflow::lbm::TauMode::Literal ? VVF_TAU_LITERAL : VVF_TAU_VISCOSITY;
  options->relaxation_constant = g.solver.relaxation_constant;
  options->u_lattice_max = g.solver.u_lattice_max;
  options->conv_tol = g.solver.conv_tol;
  options->max_iters = g.solver.max_iters;
  options->warm_start = g.solver.warm_start ? 1 : 0;
  options->jobs = g.solver.jobs;
  options->beta = g.beta;
}

void vvf_ingest_options_default(vvf_ingest_options * options)
{
  if (options == nullptr) return;
  const vvflow::highd::SplitSpec s;
  options->h = 10;
  options->p = 25;
  options->train = s.train;
  options->test = s.test;
  options->val = s.val;
  options->seed = s.seed;
}

vvf_status vvf_ingest(
  const char * tracks_csv, const char * meta_csv, const char * manifest_out,
  const vvf_ingest_options * options, vvf_ingest_stats * stats)
{
  return guarded([&] {
    require(tracks_csv && meta_csv && manifest_out, "null path");
    vvf_ingest_options o;
    vvf_ingest_options_default(&o);
    if (options != nullptr) o = *options;
    namespace hd = vvflow::highd;
    const hd::Recording rec = hd::load_recording(tracks_csv, meta_csv);
    const auto rows = hd::downsample(rec.rows, rec.meta);
    const hd::Extraction ex = hd::extract_samples(rows, rec.meta, o.h, o.p);
    const auto splits = hd::split(ex.samples, {o.train, o.test, o.val, o.seed});

    hd::Manifest m;
    m.tracks_path = std::filesystem::absolute(tracks_csv).string();
    m.meta_path = std::filesystem::absolute(meta_csv).string();
    m.h = o.h;
    m.p = o.p;
    vvf_ingest_stats st{ex.samples.size(), ex.skipped_vehicles, 0, 0, 0};
    for (std::size_t i = 0; i < ex.samples.size(); ++i) {
      const auto & s = ex.samples[i];
      m.entries.push_back({s.recording_id, s.tv_id, s.anchor_frame, splits[i]});
      (splits[i] == hd::Split::Train ? st.train : splits[i] == hd::Split::Test ? st.test : st.val)++;
    }
    std::ofstream os(manifest_out);
    if (!os) vvflow::fail(vvflow::ErrorCode::Io, std::string("cannot open '") + manifest_out + "'");
    hd::write_manifest(os, m);
    os.close();
    if (!os) vvflow::fail(vvflow::ErrorCode::Io, std::string("failed to write '") + manifest_out + "'");
    if (stats != nullptr) *stats = st;
  });
}

vvf_status vvf_sequence_from_scenario(const char * path, vvf_sequence ** out)
{
  return guarded([&] {
    require(path && out, "null argument");
    *out = new vvf_sequence{vvflow::load_scenario(path)};
  });
}

vvf_status vvf_sequence_from_manifest(const char * manifest, size_t sample_id, vvf_sequence ** out)
{
  return guarded([&] {
    require(manifest && out, "null argument");
    std::ifstream is(manifest);
    if (!is) vvflow::fail(vvflow::ErrorCode::Io, std::string("cannot open '") + manifest + "'");
    const auto m = vvflow::highd::read_manifest(is);
    const auto base = std::filesystem::absolute(manifest).parent_path();
    *out = new vvf_sequence{vvflow::highd::load_manifest_sample(m, sample_id, base).sequence};
  });
}

size_t vvf_sequence_frame_count(const vvf_sequence * seq) { return seq ? seq->value.frames.size() : 0; }

vvf_status vvf_sequence_truth(const vvf_sequence * seq, vvf_trajectory ** out)
{
  return guarded([&] {
    require(seq && out, "null argument");
    if (seq->value.future_truth.points.empty()) {
      vvflow::fail(vvflow::ErrorCode::EmptySet, "sequence carries no future trajectory");
    }
    *out = new vvf_trajectory{seq->value.future_truth};
  });
}

void vvf_sequence_free(vvf_sequence * seq) { delete seq; }

vvf_status vvf_generate(
  const vvf_sequence * seq, const vvf_solve_options * options, vvf_volume ** out, vvf_solve_stats * stats)
{
  return guarded([&] {
    require(seq && out, "null argument");
    vvf_solve_options o;
    vvf_solve_options_default(&o);
    if (options != nullptr) o = *options;
    const auto frames = vvflow::solve_sequence(seq->value, to_generate(o));
    vvf_solve_stats st{static_cast<uint32_t>(frames.size()), 0, 1, 0.0};
    for (const auto & f : frames) {
      st.max_iterations = std::max(st.max_iterations, f.iterations);
      st.all_converged = st.all_converged && f.converged;
      st.worst_delta = std::max(st.worst_delta, f.last_delta);
    }
    *out = new vvf_volume{vvflow::to_volume(frames)};
    if (stats != nullptr) *stats = st;
  });
}

vvf_status vvf_volume_read(const char * path, vvf_volume ** out)
{
  return guarded([&] {
    require(path && out, "null argument");
    *out = new vvf_volume{vvflow::read_vvf(std::filesystem::path(path))};
  });
}

vvf_status vvf_volume_write(const vvf_volume * volume, const char * path)
{
  return guarded([&] {
    require(volume && path, "null argument");
    vvflow::write_vvf(std::filesystem::path(path), volume->value);
  });
}

vvf_status vvf_volume_shape(
  const vvf_volume * volume, uint32_t * frames, uint32_t * channels, uint32_t * width_px,
  uint32_t * length_px)
{
  return guarded([&] {
    require(volume != nullptr, "null volume");
    if (frames) *frames = volume->value.frame_count;
    if (channels) *channels = volume->value.channels;
    if (width_px) *width_px = volume->value.width_px;
    if (length_px) *length_px = volume->value.length_px;
  });
}

const float * vvf_volume_data(const vvf_volume * volume)
{
  return volume ? volume->value.data.data() : nullptr;
}

vvf_status vvf_volume_to_tensors(const vvf_volume * volume, vvf_volume ** out)
{
  return guarded([&] {
    require(volume && out, "null argument");
    *out = new vvf_volume{vvflow::reconstructed_volume(vvflow::build_tensor_stack(volume->value))};
  });
}

void vvf_volume_free(vvf_volume * volume) { delete volume; }

vvf_status vvf_predict_streamline(const vvf_volume * volume, size_t steps, vvf_trajectory ** out)
{
  return guarded([&] {
    require(volume && out, "null argument");
    require(volume->value.frame_count > 0, "volume has no frames");
    vvflow::GridSpec spec;
    spec.width_px = volume->value.width_px;
    spec.length_px = volume->value.length_px;
    const auto field = vvflow::field_from_volume(volume->value, volume->value.frame_count - 1, spec);
    *out = new vvf_trajectory{vvflow::integrate_streamline(field, {0.0, 0.0}, vvflow::kFrameStep, steps)};
  });
}

vvf_status vvf_trajectory_create(const double * xy, size_t points, double dt, vvf_trajectory ** out)
{
  return guarded([&] {
    require(out != nullptr && (xy != nullptr || points == 0), "null argument");
    require(dt > 0.0, "dt must be > 0");
    vvflow::Trajectory t;
    t.dt = dt;
    for (size_t i = 0; i < points; ++i) t.points.push_back({xy[2 * i], xy[2 * i + 1]});
    *out = new vvf_trajectory{std::move(t)};
  });
}

vvf_status vvf_trajectory_read_csv(const char * path, vvf_trajectory ** out)
{
  return guarded([&] {
    require(path && out, "null argument");
    std::ifstream is(path);
    if (!is) vvflow::fail(vvflow::ErrorCode::Io, std::string("cannot open '") + path + "'");
    *out = new vvf_trajectory{vvflow::read_trajectory_csv(is)};
  });
}

vvf_status vvf_trajectory_write_csv(const vvf_trajectory * traj, const char * path)
{
  return guarded([&] {
    require(traj && path, "null argument");
    std::ofstream os(path);
    if (!os) vvflow::fail(vvflow::ErrorCode::Io, std::string("cannot open '") + path + "'");
    vvflow::write_trajectory_csv(os, traj->value);
    os.close();
    if (!os) vvflow::fail(vvflow::ErrorCode::Io, std::string("failed to write '") + path + "'");
  });
}

size_t vvf_trajectory_size(const vvf_trajectory * traj) { return traj ? traj->value.size() : 0; }

vvf_status vvf_trajectory_point(const vvf_trajectory * traj, size_t index, double * x, double * y)
{
  return guarded([&] {
    require(traj != nullptr, "null trajectory");
    require(index < traj->value.size(), "point index out of range");
    if (x) *x = traj->value.points[index].x;
    if (y) *y = traj->value.points[index].y;
  });
}

int vvf_trajectory_extrapolated(const vvf_trajectory * traj) { return traj && traj->value.extrapolated ? 1 : 0; }

void vvf_trajectory_free(vvf_trajectory * traj) { delete traj; }

vvf_status vvf_evaluate(
  const vvf_trajectory * const * preds, const vvf_trajectory * const * truths, size_t count,
  vvf_report ** out)
{
  return guarded([&] {
    require(out != nullptr && (count == 0 || (preds && truths)), "null argument");
    std::vector<vvflow::Trajectory> p;
    std::vector<vvflow::Trajectory> t;
    for (size_t i = 0; i < count; ++i) {
      require(preds[i] && truths[i], "null trajectory");
      p.push_back(preds[i]->value);
      t.push_back(truths[i]->value);
    }
    *out = new vvf_report{vvflow::make_report(p, t)};
  });
}

size_t vvf_report_size(const vvf_report * report) { return report ? report->value.rows.size() : 0; }

vvf_status vvf_report_row_at(const vvf_report * report, size_t index, vvf_report_row * row)
{
  return guarded([&] {
    require(report && row, "null argument");
    require(index < report->value.rows.size(), "row index out of range");
    const auto & r = report->value.rows[index];
    *row = {r.horizon_s, r.rmse_x, r.rmse_y, r.rmse_r};
  });
}

vvf_status vvf_report_write_csv(const vvf_report * report, const char * path)
{
  return guarded([&] {
    require(report && path, "null argument");
    std::ofstream os(path);
    if (!os) vvflow::fail(vvflow::ErrorCode::Io, std::string("cannot open '") + path + "'");
    vvflow::write_report_csv(os, report->value);
    os.close();
    if (!os) vvflow::fail(vvflow::ErrorCode::Io, std::string("failed to write '") + path + "'");
  });
}

void vvf_report_free(vvf_report * report) { delete report; }

vvf_status vvf_huber_loss(
  const double * pred, const double * truth, size_t n, double delta, int per_coordinate, double * out)
{
  return guarded([&] {
    require(out != nullptr && (n == 0 || (pred && truth)), "null argument");
    const std::vector<double> a(pred, pred + n);
    const std::vector<double> b(truth, truth + n);
    *out = vvflow::huber_loss(a, b, {delta, per_coordinate != 0});
  });
}

vvf_status vvf_bench(
  size_t length_px, size_t width_px, int iterations, int tau_mode, int jobs, vvf_bench_result * out)
{
  return guarded([&] {
    require(out != nullptr, "null result");
    require(length_px >= 16 && width_px >= 16, "bench lattices must be at least 16x16");
    require(iterations > 0, "iterations must be positive");
    const auto r = vvflow::lbm::bench(
      width_px, length_px, iterations,
      tau_mode == VVF_TAU_LITERAL ? vvflow::lbm::TauMode::Literal : vvflow::lbm::TauMode::ViscosityDerived,
      jobs);
    *out = {r.cells, r.iterations, r.seconds, r.mlups};
  });
}

}  // extern "C"
