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


/* C interface to the vvflow engine. All objects are opaque handles owned by
 * the caller and released with the matching *_free function. Functions
 * return VVF_OK or an error status; vvf_last_error() describes the most
 * recent failure on the calling thread. */

#ifndef VVFLOW_VVFLOW_H_
#define VVFLOW_VVFLOW_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(VVFLOW_BUILDING)
#define VVF_API __declspec(dllexport)
#else
#define VVF_API __declspec(dllimport)
#endif
#else
#define VVF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vvf_status {
  VVF_OK = 0,
  VVF_ERR_INVALID_ARGUMENT = 1,
  VVF_ERR_IO = 2,
  VVF_ERR_FORMAT = 3,
  VVF_ERR_MISSING_COLUMN = 4,
  VVF_ERR_CORRUPT_FILE = 5,
  VVF_ERR_SHAPE_MISMATCH = 6,
  VVF_ERR_LENGTH_MISMATCH = 7,
  VVF_ERR_EMPTY_SET = 8,
  VVF_ERR_MISSING_TARGET_VEHICLE = 9,
  VVF_ERR_LAYOUT_OUT_OF_GRID = 10,
  VVF_ERR_NUMERICAL_BLOWUP = 11,
  VVF_ERR_INCOMPATIBLE_FRAME_RATE = 12,
  VVF_ERR_OUT_OF_FIELD = 13,
  VVF_ERR_INTERNAL = 99
} vvf_status;

typedef enum vvf_tau_mode { VVF_TAU_VISCOSITY = 0, VVF_TAU_LITERAL = 1 } vvf_tau_mode;

typedef struct vvf_sequence vvf_sequence;
typedef struct vvf_volume vvf_volume;
typedef struct vvf_trajectory vvf_trajectory;
typedef struct vvf_report vvf_report;

typedef struct vvf_solve_options
{
  int tau_mode;
  double relaxation_constant;
  double u_lattice_max;
  double conv_tol;
  int max_iters;
  int warm_start;
  int jobs;
  double beta;
} vvf_solve_options;

typedef struct vvf_solve_stats
{
  uint32_t frames;
  int max_iterations;
  int all_converged;
  double worst_delta;
} vvf_solve_stats;

typedef struct vvf_ingest_options
{
  uint32_t h;
  uint32_t p;
  double train;
  double test;
  double val;
  uint64_t seed;
} vvf_ingest_options;

typedef struct vvf_ingest_stats
{
  size_t samples;
  size_t skipped_vehicles;
  size_t train;
  size_t test;
  size_t val;
} vvf_ingest_stats;

typedef struct vvf_bench_result
{
  size_t cells;
  int iterations;
  double seconds;
  double mlups;
} vvf_bench_result;

typedef struct vvf_report_row
{
  double horizon_s;
  double rmse_x;
  double rmse_y;
  double rmse_r;
} vvf_report_row;

VVF_API const char * vvf_version(void);
VVF_API const char * vvf_last_error(void);
VVF_API const char * vvf_status_name(vvf_status status);

VVF_API void vvf_solve_options_default(vvf_solve_options * options);
VVF_API void vvf_ingest_options_default(vvf_ingest_options * options);

/* Parses highD tracks/meta files, extracts samples, splits them and writes
 * a manifest. `stats` may be NULL. */
VVF_API vvf_status vvf_ingest(
  const char * tracks_csv, const char * meta_csv, const char * manifest_out,
  const vvf_ingest_options * options, vvf_ingest_stats * stats);

VVF_API vvf_status vvf_sequence_from_scenario(const char * path, vvf_sequence ** out);
VVF_API vvf_status vvf_sequence_from_manifest(const char * manifest, size_t sample_id, vvf_sequence ** out);
VVF_API size_t vvf_sequence_frame_count(const vvf_sequence * seq);
/* Future of the target as a trajectory; VVF_ERR_EMPTY_SET when there is none. */
VVF_API vvf_status vvf_sequence_truth(const vvf_sequence * seq, vvf_trajectory ** out);
VVF_API void vvf_sequence_free(vvf_sequence * seq);

/* Solves every observed frame and packs occupancy, vx, vy into a volume.
 * `options` NULL means defaults; `stats` may be NULL. */
VVF_API vvf_status vvf_generate(
  const vvf_sequence * seq, const vvf_solve_options * options, vvf_volume ** out, vvf_solve_stats * stats);

VVF_API vvf_status vvf_volume_read(const char * path, vvf_volume ** out);
VVF_API vvf_status vvf_volume_write(const vvf_volume * volume, const char * path);
VVF_API vvf_status vvf_volume_shape(
  const vvf_volume * volume, uint32_t * frames, uint32_t * channels, uint32_t * width_px,
  uint32_t * length_px);
/* Frame, channel, row, column order; valid until the volume is freed. */
VVF_API const float * vvf_volume_data(const vvf_volume * volume);
/* Per-channel concatenation of all frames as a one-frame volume. */
VVF_API vvf_status vvf_volume_to_tensors(const vvf_volume * volume, vvf_volume ** out);
VVF_API void vvf_volume_free(vvf_volume * volume);

/* Streamline from the target cells of the last frame, `steps` points at 0.2 s. */
VVF_API vvf_status vvf_predict_streamline(const vvf_volume * volume, size_t steps, vvf_trajectory ** out);

VVF_API vvf_status vvf_trajectory_create(const double * xy, size_t points, double dt, vvf_trajectory ** out);
VVF_API vvf_status vvf_trajectory_read_csv(const char * path, vvf_trajectory ** out);
VVF_API vvf_status vvf_trajectory_write_csv(const vvf_trajectory * traj, const char * path);
VVF_API size_t vvf_trajectory_size(const vvf_trajectory * traj);
VVF_API vvf_status vvf_trajectory_point(const vvf_trajectory * traj, size_t index, double * x, double * y);
VVF_API int vvf_trajectory_extrapolated(const vvf_trajectory * traj);
VVF_API void vvf_trajectory_free(vvf_trajectory * traj);

VVF_API vvf_status vvf_evaluate(
  const vvf_trajectory * const * preds, const vvf_trajectory * const * truths, size_t count,
  vvf_report ** out);
VVF_API size_t vvf_report_size(const vvf_report * report);
VVF_API vvf_status vvf_report_row_at(const vvf_report * report, size_t index, vvf_report_row * row);
VVF_API vvf_status vvf_report_write_csv(const vvf_report * report, const char * path);
VVF_API void vvf_report_free(vvf_report * report);

/* Huber loss of two equal-length vectors. */
VVF_API vvf_status vvf_huber_loss(
  const double * pred, const double * truth, size_t n, double delta, int per_coordinate, double * out);

VVF_API vvf_status vvf_bench(
  size_t length_px, size_t width_px, int iterations, int tau_mode, int jobs, vvf_bench_result * out);

#ifdef __cplusplus
}
#endif

#endif /* VVFLOW_VVFLOW_H_ */
