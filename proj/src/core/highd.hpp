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


#ifndef VVFLOW_CORE_HIGHD_HPP_
#define VVFLOW_CORE_HIGHD_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scene.hpp"

namespace vvflow::highd
{

/// Fallback lane speed when a recording has no posted limit, m/s.
inline constexpr double kDefaultNominalSpeed = 30.0;

struct RecordingMeta
{
  int recording_id{0};
  double frame_rate{25.0};
  // Image-frame y of the markings (pointing down), outermost ones are the road edges.
  std::vector<double> upper_lane_markings;
  std::vector<double> lower_lane_markings;
  // m/s; nullopt when the recording has none.
  std::optional<double> speed_limit;
};

/// One tracks.csv row. x, y are the top-left corner of the box in image
/// coordinates; width runs along x and height along y.
struct TrackRow
{
  long frame{0};
  int id{0};
  double x{0.0};
  double y{0.0};
  double width{0.0};
  double height{0.0};
  double x_velocity{0.0};
  double y_velocity{0.0};

  friend bool operator==(const TrackRow &, const TrackRow &) = default;
};

struct Recording
{
  RecordingMeta meta;
  std::vector<TrackRow> rows;
};

/// Throws MissingColumn for absent headers and Format (with line number) for
/// bad numbers. Extra columns are ignored.
Recording parse_recording(std::istream & tracks_csv, std::istream & meta_csv);
Recording load_recording(const std::filesystem::path & tracks, const std::filesystem::path & meta);

void write_tracks_csv(std::ostream & os, const std::vector<TrackRow> & rows);
void write_meta_csv(std::ostream & os, const RecordingMeta & meta);

/// Frame stride that yields the 0.2 s sequence step. Throws IncompatibleFrameRate.
long frame_stride(const RecordingMeta & meta);

/// Keeps rows whose frame is a whole number of strides after the first frame.
std::vector<TrackRow> downsample(const std::vector<TrackRow> & rows, const RecordingMeta & meta);

struct Sample
{
  int recording_id{0};
  int tv_id{0};
  // Last observed frame, in source frame numbers.
  long anchor_frame{0};
  SceneSequence sequence;
};

struct Extraction
{
  std::vector<Sample> samples;
  // Vehicles that produced no sample.
  std::size_t skipped_vehicles{0};
};

/// One sample per (vehicle, anchor) such that the vehicle is present in the h
/// observed frames ending at the anchor and the p frames after it, all on the
/// 0.2 s lattice. Surrounding vehicles are those on the target's carriageway.
/// Frames stay in world coordinates; the future is expressed in the
/// direction-normalised frame centred on the target at the anchor.
Extraction extract_samples(
  const std::vector<TrackRow> & rows, const RecordingMeta & meta, std::size_t h, std::size_t p);

/// The sample for one (tv_id, anchor_frame), or nullopt if it is not valid.
std::optional<Sample> extract_sample(
  const std::vector<TrackRow> & rows, const RecordingMeta & meta, std::size_t h, std::size_t p,
  int tv_id, long anchor_frame);

enum class Split { Train, Test, Val };

const char * split_name(Split s);
Split parse_split(const std::string & s);

struct SplitSpec
{
  double train{0.7};
  double test{0.2};
  double val{0.1};
  std::uint64_t seed{0};

  void validate() const;
};

/// Assignment per sample. Whole recordings go to one split; the recording
/// counts per split are rounded from the ratios.
std::vector<Split> split(const std::vector<Sample> & samples, const SplitSpec & spec);

struct ManifestEntry
{
  int recording_id{0};
  int tv_id{0};
  long anchor_frame{0};
  Split split{Split::Train};
};

struct Manifest
{
  std::string tracks_path;
  std::string meta_path;
  std::size_t h{10};
  std::size_t p{25};
  std::vector<ManifestEntry> entries;
};

void write_manifest(std::ostream & os, const Manifest & manifest);
Manifest read_manifest(std::istream & is);

/// Re-reads the manifest's recording (relative paths resolve against
/// `base_dir`) and rebuilds sample `index`.
Sample load_manifest_sample(const Manifest & manifest, std::size_t index, const std::filesystem::path & base_dir);

}  // namespace vvflow::highd

#endif  // VVFLOW_CORE_HIGHD_HPP_
