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


#include "highd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "error.hpp"

namespace vvflow::highd
{

namespace
{

std::vector<double> parse_markings(const std::string & s, std::size_t line)
{
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      fail(ErrorCode::Format, "line " + std::to_string(line) + ": bad lane marking '" + item + "'");
    }
  }
  return out;
}

std::string join_markings(const std::vector<double> & v)
{
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
  return os.str();
}

enum class Carriageway { Upper, Lower };

struct Road
{
  std::optional<RoadLayout> upper;
  std::optional<RoadLayout> lower;
  // Image y separating the two carriageways.
  double divider{0.0};

  const std::optional<RoadLayout> & of(Carriageway c) const { return c == Carriageway::Upper ? upper : lower; }
};

std::optional<RoadLayout> make_layout(
  const std::vector<double> & image_markings, DriveDirection dir, double speed)
{
  if (image_markings.size() < 2) return std::nullopt;
  std::vector<double> world;
  for (double m : image_markings) world.push_back(-m);
  std::sort(world.begin(), world.end());
  RoadLayout layout;
  layout.road_edge_offsets = {world.front(), world.back()};
  layout.lane_marking_offsets.assign(world.begin() + 1, world.end() - 1);
  layout.lane_nominal_speeds.assign(layout.lane_count(), speed);
  layout.drive_direction = dir;
  return layout;
}

Road make_road(const RecordingMeta & meta)
{
  const double speed =
    meta.speed_limit && *meta.speed_limit > 0.0 ? *meta.speed_limit : kDefaultNominalSpeed;
  Road road;
  road.upper = make_layout(meta.upper_lane_markings, DriveDirection::RightToLeft, speed);
  road.lower = make_layout(meta.lower_lane_markings, DriveDirection::LeftToRight, speed);
  const auto & up = meta.upper_lane_markings;
  const auto & lo = meta.lower_lane_markings;
  if (!up.empty() && !lo.empty()) {
    road.divider = 0.5 * (*std::max_element(up.begin(), up.end()) + *std::min_element(lo.begin(), lo.end()));
  } else if (!up.empty()) {
    road.divider = std::numeric_limits<double>::infinity();
  } else {
    road.divider = -std::numeric_limits<double>::infinity();
  }
  return road;
}

Carriageway carriageway_of(const TrackRow & r, const Road & road)
{
  return r.y + 0.5 * r.height < road.divider ? Carriageway::Upper : Carriageway::Lower;
}

Vehicle to_vehicle(const TrackRow & r, bool target)
{
  Vehicle v;
  v.id = r.id;
  v.center = {r.x + 0.5 * r.width, -(r.y + 0.5 * r.height)};
  v.velocity = {r.x_velocity, -r.y_velocity};
  v.length = r.width;
  v.width = r.height;
  v.is_target = target;
  return v;
}

// Rows indexed by frame, then vehicle id.
using FrameIndex = std::map<long, std::map<int, const TrackRow *>>;

FrameIndex index_lattice(const std::vector<TrackRow> & rows, long stride)
{
  FrameIndex idx;
  if (rows.empty()) return idx;
  long first = rows.front().frame;
  for (const auto & r : rows) first = std::min(first, r.frame);
  for (const auto & r : rows) {
    if ((r.frame - first) % stride == 0) idx[r.frame][r.id] = &r;
  }
  return idx;
}

std::optional<Sample> build_sample(
  const FrameIndex & idx, const Road & road, const RecordingMeta & meta, long stride, std::size_t h,
  std::size_t p, int tv_id, long anchor)
{
  const auto present = [&](long f) -> const TrackRow * {
    const auto it = idx.find(f);
    if (it == idx.end()) return nullptr;
    const auto jt = it->second.find(tv_id);
    return jt == it->second.end() ? nullptr : jt->second;
  };
  const long h_l = static_cast<long>(h);
  const long p_l = static_cast<long>(p);
  for (long k = -(h_l - 1); k <= p_l; ++k) {
    if (present(anchor + k * stride) == nullptr) return std::nullopt;
  }
  const Carriageway side = carriageway_of(*present(anchor), road);
  const auto & layout = road.of(side);
  if (!layout) return std::nullopt;

  Sample s;
  s.recording_id = meta.recording_id;
  s.tv_id = tv_id;
  s.anchor_frame = anchor;
  for (long k = -(h_l - 1); k <= 0; ++k) {
    const long f = anchor + k * stride;
    SceneFrame frame;
    frame.timestamp = static_cast<double>(f) / meta.frame_rate;
    frame.layout = *layout;
    for (const auto & [id, row] : idx.at(f)) {
      if (id != tv_id && carriageway_of(*row, road) != side) continue;
      frame.vehicles.push_back(to_vehicle(*row, id == tv_id));
    }
    s.sequence.frames.push_back(std::move(frame));
  }

  const SceneFrame last = normalize_direction(s.sequence.frames.back());
  const Vec2 origin = last.target()->center;
  const double c = layout->centerline();
  const bool flip = layout->drive_direction == DriveDirection::RightToLeft;
  s.sequence.future_truth.dt = kFrameStep;
  for (long k = 1; k <= p_l; ++k) {
    Vec2 q = to_vehicle(*present(anchor + k * stride), true).center;
    if (flip) q = {-q.x, 2.0 * c - q.y};
    s.sequence.future_truth.points.push_back(q - origin);
  }
  return s;
}

}  // namespace

Recording parse_recording(std::istream & tracks_csv, std::istream & meta_csv)
{
  Recording rec;
  const CsvTable meta = read_csv(meta_csv);
  const auto c_id = meta.column("id");
  const auto c_rate = meta.column("frameRate");
  const auto c_limit = meta.column("speedLimit");
  const auto c_up = meta.column("upperLaneMarkings");
  const auto c_lo = meta.column("lowerLaneMarkings");
  if (meta.rows.empty()) fail(ErrorCode::Format, "recording meta has no data row");
  rec.meta.recording_id = static_cast<int>(meta.integer(0, c_id));
  rec.meta.frame_rate = meta.number(0, c_rate);
  if (!(rec.meta.frame_rate > 0.0)) fail(ErrorCode::Format, "frameRate must be positive");
  const double limit = meta.number(0, c_limit);
  if (limit > 0.0) rec.meta.speed_limit = limit;
  rec.meta.upper_lane_markings = parse_markings(meta.cell(0, c_up), meta.lines[0]);
  rec.meta.lower_lane_markings = parse_markings(meta.cell(0, c_lo), meta.lines[0]);

  const CsvTable t = read_csv(tracks_csv);
  const auto c_frame = t.column("frame");
  const auto c_vid = t.column("id");
  const auto c_x = t.column("x");
  const auto c_y = t.column("y");
  const auto c_w = t.column("width");
  const auto c_h = t.column("height");
  const auto c_vx = t.column("xVelocity");
  const auto c_vy = t.column("yVelocity");
  rec.rows.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    TrackRow r;
    r.frame = static_cast<long>(t.integer(i, c_frame));
    r.id = static_cast<int>(t.integer(i, c_vid));
    r.x = t.number(i, c_x);
    r.y = t.number(i, c_y);
    r.width = t.number(i, c_w);
    r.height = t.number(i, c_h);
    r.x_velocity = t.number(i, c_vx);
    r.y_velocity = t.number(i, c_vy);
    if (!(r.width > 0.0 && r.height > 0.0)) {
      fail(ErrorCode::Format, "line " + std::to_string(t.lines[i]) + ": box size must be positive");
    }
    rec.rows.push_back(r);
  }
  return rec;
}

Recording load_recording(const std::filesystem::path & tracks, const std::filesystem::path & meta)
{
  std::ifstream ts(tracks);
  if (!ts) fail(ErrorCode::Io, "cannot open '" + tracks.string() + "'");
  std::ifstream ms(meta);
  if (!ms) fail(ErrorCode::Io, "cannot open '" + meta.string() + "'");
  return parse_recording(ts, ms);
}

void write_tracks_csv(std::ostream & os, const std::vector<TrackRow> & rows)
{
  os << "frame,id,x,y,width,height,xVelocity,yVelocity\n" << std::setprecision(17);
  for (const auto & r : rows) {
    os << r.frame << ',' << r.id << ',' << r.x << ',' << r.y << ',' << r.width << ',' << r.height
       << ',' << r.x_velocity << ',' << r.y_velocity << '\n';
  }
}

void write_meta_csv(std::ostream & os, const RecordingMeta & meta)
{
  os << "id,frameRate,speedLimit,upperLaneMarkings,lowerLaneMarkings\n" << std::setprecision(17);
  os << meta.recording_id << ',' << meta.frame_rate << ',' << meta.speed_limit.value_or(-1.0) << ','
     << join_markings(meta.upper_lane_markings) << ',' << join_markings(meta.lower_lane_markings)
     << '\n';
}

long frame_stride(const RecordingMeta & meta)
{
  const double s = meta.frame_rate * kFrameStep;
  const double r = std::round(s);
  if (r < 1.0 || std::abs(s - r) > 1e-9) {
    std::ostringstream msg;
    msg << "frame rate " << meta.frame_rate << " Hz has no integer stride for " << kFrameStep << " s";
    fail(ErrorCode::IncompatibleFrameRate, msg.str());
  }
  return static_cast<long>(r);
}

std::vector<TrackRow> downsample(const std::vector<TrackRow> & rows, const RecordingMeta & meta)
{
  const long stride = frame_stride(meta);
  if (rows.empty()) return {};
  long first = rows.front().frame;
  for (const auto & r : rows) first = std::min(first, r.frame);
  std::vector<TrackRow> out;
  for (const auto & r : rows) {
    if ((r.frame - first) % stride == 0) out.push_back(r);
  }
  return out;
}

Extraction extract_samples(
  const std::vector<TrackRow> & rows, const RecordingMeta & meta, std::size_t h, std::size_t p)
{
  if (h < 1 || p < 1) fail(ErrorCode::InvalidArgument, "h and p must be at least 1");
  const long stride = frame_stride(meta);
  const FrameIndex idx = index_lattice(rows, stride);
  const Road road = make_road(meta);

  std::map<int, std::vector<long>> frames_of;
  for (const auto & [f, vehicles] : idx) {
    for (const auto & [id, row] : vehicles) frames_of[id].push_back(f);
  }
  Extraction out;
  for (const auto & [id, frames] : frames_of) {
    std::size_t made = 0;
    for (long anchor : frames) {
      if (auto s = build_sample(idx, road, meta, stride, h, p, id, anchor)) {
        out.samples.push_back(std::move(*s));
        ++made;
      }
    }
    if (made == 0) ++out.skipped_vehicles;
  }
  return out;
}

std::optional<Sample> extract_sample(
  const std::vector<TrackRow> & rows, const RecordingMeta & meta, std::size_t h, std::size_t p,
  int tv_id, long anchor_frame)
{
  if (h < 1 || p < 1) fail(ErrorCode::InvalidArgument, "h and p must be at least 1");
  const long stride = frame_stride(meta);
  return build_sample(index_lattice(rows, stride), make_road(meta), meta, stride, h, p, tv_id, anchor_frame);
}

const char * split_name(Split s)
{
  switch (s) {
    case Split::Train:
      return "train";
    case Split::Test:
      return "test";
    case Split::Val:
      return "val";
  }
  return "train";
}

Split parse_split(const std::string & s)
{
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  if (s == "val") return Split::Val;
  fail(ErrorCode::Format, "unknown split '" + s + "'");
}

void SplitSpec::validate() const
{
  if (train < 0.0 || test < 0.0 || val < 0.0 || std::abs(train + test + val - 1.0) > 1e-9) {
    fail(ErrorCode::InvalidArgument, "split ratios must be non-negative and sum to 1");
  }
}

std::vector<Split> split(const std::vector<Sample> & samples, const SplitSpec & spec)
{
  spec.validate();
  std::vector<int> recordings;
  {
    std::set<int> ids;
    for (const auto & s : samples) ids.insert(s.recording_id);
    recordings.assign(ids.begin(), ids.end());
  }
  // Fisher-Yates on raw engine output keeps the order identical across standard libraries.
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = recordings.size(); i > 1; --i) {
    std::swap(recordings[i - 1], recordings[rng() % i]);
  }
  const double n = static_cast<double>(recordings.size());
  const auto n_train = static_cast<std::size_t>(std::lround(spec.train * n));
  const auto n_test = std::min(
    recordings.size() - std::min(n_train, recordings.size()),
    static_cast<std::size_t>(std::lround(spec.test * n)));

  std::map<int, Split> assign;
  for (std::size_t i = 0; i < recordings.size(); ++i) {
    assign[recordings[i]] = i < n_train ? Split::Train : i < n_train + n_test ? Split::Test : Split::Val;
  }
  std::vector<Split> out;
  out.reserve(samples.size());
  for (const auto & s : samples) out.push_back(assign.at(s.recording_id));
  return out;
}

void write_manifest(std::ostream & os, const Manifest & m)
{
  os << "# vvflow manifest\n"
     << "# tracks: " << m.tracks_path << '\n'
     << "# meta: " << m.meta_path << '\n'
     << "# h: " << m.h << '\n'
     << "# p: " << m.p << '\n'
     << "recording_id,tv_id,anchor_frame,split\n";
  for (const auto & e : m.entries) {
    os << e.recording_id << ',' << e.tv_id << ',' << e.anchor_frame << ',' << split_name(e.split) << '\n';
  }
}

Manifest read_manifest(std::istream & is)
{
  Manifest m;
  std::ostringstream body;
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon != std::string::npos) {
        const std::string key = line.substr(2, colon - 2);
        std::string value = line.substr(colon + 2);
        while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
        if (key == "tracks") m.tracks_path = value;
        if (key == "meta") m.meta_path = value;
        if (key == "h") m.h = static_cast<std::size_t>(std::stoul(value));
        if (key == "p") m.p = static_cast<std::size_t>(std::stoul(value));
      }
    }
    body << line << '\n';
  }
  std::istringstream rest(body.str());
  const CsvTable t = read_csv(rest);
  const auto c_rec = t.column("recording_id");
  const auto c_tv = t.column("tv_id");
  const auto c_anchor = t.column("anchor_frame");
  const auto c_split = t.column("split");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    m.entries.push_back(
      {static_cast<int>(t.integer(i, c_rec)), static_cast<int>(t.integer(i, c_tv)),
       static_cast<long>(t.integer(i, c_anchor)), parse_split(t.cell(i, c_split))});
  }
  if (m.tracks_path.empty() || m.meta_path.empty()) {
    fail(ErrorCode::Format, "manifest lacks its '# tracks:' or '# meta:' line");
  }
  return m;
}

Sample load_manifest_sample(
  const Manifest & manifest, std::size_t index, const std::filesystem::path & base_dir)
{
  if (index >= manifest.entries.size()) {
    fail(
      ErrorCode::InvalidArgument, "sample id " + std::to_string(index) + " out of range (manifest has " +
                                    std::to_string(manifest.entries.size()) + ")");
  }
  const auto resolve = [&](const std::string & p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  const Recording rec = load_recording(resolve(manifest.tracks_path), resolve(manifest.meta_path));
  const ManifestEntry & e = manifest.entries[index];
  auto s = extract_sample(rec.rows, rec.meta, manifest.h, manifest.p, e.tv_id, e.anchor_frame);
  if (!s) {
    fail(
      ErrorCode::Format, "manifest entry " + std::to_string(index) +
                           " does not match a valid sample in the recording");
  }
  return std::move(*s);
}

}  // namespace vvflow::highd
