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


#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vvflow/vvflow.h"

namespace
{

// Runtime failures exit with 1, usage errors with 2.
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int report(vvf_status status)
{
  std::fprintf(stderr, "error: %s: %s\n", vvf_status_name(status), vvf_last_error());
  return kExitRuntime;
}

#define VVF_TRY(expr)                        \
  do {                                       \
    const vvf_status s_ = (expr);            \
    if (s_ != VVF_OK) return report(s_);     \
  } while (0)

const std::map<std::string, int> kTauModes{{"viscosity", VVF_TAU_VISCOSITY}, {"literal", VVF_TAU_LITERAL}};

struct IngestArgs
{
  std::string tracks;
  std::string meta;
  std::string out;
  vvf_ingest_options options{};
  std::vector<double> ratios{0.7, 0.2, 0.1};
};

struct VvfArgs
{
  std::string manifest;
  std::size_t sample_id{0};
  std::string scenario;
  std::string out;
  std::string truth_out;
  vvf_solve_options options{};
  bool warm_start{false};
};

struct PredictArgs
{
  std::string vvf;
  std::string out;
  std::size_t steps{25};
};

struct EvalArgs
{
  std::vector<std::string> preds;
  std::vector<std::string> truths;
  std::string out;
};

struct ExportArgs
{
  std::string vvf;
  std::string out;
};

struct BenchArgs
{
  std::string dims{"256x64"};
  int iters{100};
  int tau_mode{VVF_TAU_VISCOSITY};
  int jobs{1};
};

int run_ingest(const IngestArgs & a)
{
  vvf_ingest_options o = a.options;
  o.train = a.ratios[0];
  o.test = a.ratios[1];
  o.val = a.ratios[2];
  vvf_ingest_stats st{};
  VVF_TRY(vvf_ingest(a.tracks.c_str(), a.meta.c_str(), a.out.c_str(), &o, &st));
  std::printf(
    "samples %zu (train %zu, test %zu, val %zu), vehicles skipped %zu\n", st.samples, st.train, st.test,
    st.val, st.skipped_vehicles);
  return 0;
}

int run_vvf(const VvfArgs & a)
{
  vvf_sequence * seq = nullptr;
  if (!a.scenario.empty()) {
    VVF_TRY(vvf_sequence_from_scenario(a.scenario.c_str(), &seq));
  } else {
    VVF_TRY(vvf_sequence_from_manifest(a.manifest.c_str(), a.sample_id, &seq));
  }
  vvf_solve_options o = a.options;
  o.warm_start = a.warm_start ? 1 : 0;
  vvf_volume * vol = nullptr;
  vvf_solve_stats st{};
  vvf_status s = vvf_generate(seq, &o, &vol, &st);
  if (s == VVF_OK) s = vvf_volume_write(vol, a.out.c_str());
  if (s == VVF_OK && !a.truth_out.empty()) {
    vvf_trajectory * truth = nullptr;
    s = vvf_sequence_truth(seq, &truth);
    if (s == VVF_OK) s = vvf_trajectory_write_csv(truth, a.truth_out.c_str());
    vvf_trajectory_free(truth);
  }
  vvf_volume_free(vol);
  vvf_sequence_free(seq);
  if (s != VVF_OK) return report(s);
  std::printf(
    "frames %u, max iterations %d, converged %s, worst |du| %.3g m/s\n", st.frames, st.max_iterations,
    st.all_converged ? "yes" : "no", st.worst_delta);
  if (!st.all_converged) std::fprintf(stderr, "warning: iteration cap reached before convergence\n");
  return 0;
}

int run_predict(const PredictArgs & a)
{
  vvf_volume * vol = nullptr;
  VVF_TRY(vvf_volume_read(a.vvf.c_str(), &vol));
  vvf_trajectory * traj = nullptr;
  vvf_status s = vvf_predict_streamline(vol, a.steps, &traj);
  if (s == VVF_OK) s = vvf_trajectory_write_csv(traj, a.out.c_str());
  const int extrapolated = vvf_trajectory_extrapolated(traj);
  vvf_trajectory_free(traj);
  vvf_volume_free(vol);
  if (s != VVF_OK) return report(s);
  if (extrapolated) std::fprintf(stderr, "note: streamline left the field and was extrapolated\n");
  return 0;
}

int run_eval(const EvalArgs & a)
{
  if (a.preds.size() != a.truths.size()) {
    std::fprintf(stderr, "error: need as many --truth files as --pred files\n");
    return kExitUsage;
  }
  std::vector<vvf_trajectory *> preds;
  std::vector<vvf_trajectory *> truths;
  vvf_status s = VVF_OK;
  for (std::size_t i = 0; i < a.preds.size() && s == VVF_OK; ++i) {
    vvf_trajectory * p = nullptr;
    vvf_trajectory * t = nullptr;
    s = vvf_trajectory_read_csv(a.preds[i].c_str(), &p);
    if (s == VVF_OK) s = vvf_trajectory_read_csv(a.truths[i].c_str(), &t);
    preds.push_back(p);
    truths.push_back(t);
  }
  vvf_report * rep = nullptr;
  if (s == VVF_OK) s = vvf_evaluate(preds.data(), truths.data(), preds.size(), &rep);
  if (s == VVF_OK) s = vvf_report_write_csv(rep, a.out.c_str());
  for (std::size_t i = 0; s == VVF_OK && i < vvf_report_size(rep); ++i) {
    vvf_report_row row{};
    vvf_report_row_at(rep, i, &row);
    std::printf("%.1f s: rmse_x %.4f  rmse_y %.4f  rmse_r %.4f\n", row.horizon_s, row.rmse_x, row.rmse_y, row.rmse_r);
  }
  vvf_report_free(rep);
  for (auto * p : preds) vvf_trajectory_free(p);
  for (auto * t : truths) vvf_trajectory_free(t);
  return s == VVF_OK ? 0 : report(s);
}

int run_export(const ExportArgs & a)
{
  vvf_volume * vol = nullptr;
  VVF_TRY(vvf_volume_read(a.vvf.c_str(), &vol));
  vvf_volume * rec = nullptr;
  vvf_status s = vvf_volume_to_tensors(vol, &rec);
  if (s == VVF_OK) s = vvf_volume_write(rec, a.out.c_str());
  uint32_t frames = 0;
  uint32_t width = 0;
  uint32_t length = 0;
  vvf_volume_shape(vol, &frames, nullptr, &width, &length);
  vvf_volume_free(rec);
  vvf_volume_free(vol);
  if (s != VVF_OK) return report(s);
  std::printf(
    "initial (%u, %u, %u) -> reconstructed (3, %u, %u)\n", frames, 3 * width, length, frames * width, length);
  return 0;
}

int run_bench(const BenchArgs & a)
{
  std::size_t length = 0;
  std::size_t width = 0;
  char sep = 0;
  if (std::sscanf(a.dims.c_str(), "%zu%c%zu", &length, &sep, &width) != 3 || (sep != 'x' && sep != 'X')) {
    std::fprintf(stderr, "error: --dims must look like 256x64\n");
    return kExitUsage;
  }
  vvf_bench_result r{};
  VVF_TRY(vvf_bench(length, width, a.iters, a.tau_mode, a.jobs, &r));
  std::printf(
    "%zux%zu lattice, %d iterations: %.4f s, %.2f MLUPS\n", length, width, r.iterations, r.seconds, r.mlups);
  vvf_bench_result ref = r;
  if (length != 256 || width != 64 || a.iters != 100) {
    VVF_TRY(vvf_bench(256, 64, 100, a.tau_mode, a.jobs, &ref));
  }
  std::printf(
    "100 updates of 256x64: %.2f ms here; reference GPU time 4.4 ms (about 400 MLUPS)\n",
    1e3 * ref.seconds);
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Velocity vector fields for driving scenes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vvf_version()));

  IngestArgs ingest;
  vvf_ingest_options_default(&ingest.options);
  auto * c_ingest = app.add_subcommand("ingest", "Extract samples from a highD recording into a manifest");
  c_ingest->add_option("--tracks", ingest.tracks, "tracks CSV")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("--meta", ingest.meta, "recording meta CSV")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("--out", ingest.out, "manifest to write")->required();
  c_ingest->add_option("--history", ingest.options.h, "observed frames per sample")->capture_default_str()->check(CLI::PositiveNumber);
  c_ingest->add_option("--future", ingest.options.p, "future frames per sample")->capture_default_str()->check(CLI::PositiveNumber);
  c_ingest->add_option("--seed", ingest.options.seed, "split seed")->capture_default_str();
  c_ingest->add_option("--ratios", ingest.ratios, "train,test,val fractions")
    ->delimiter(',')
    ->expected(3)
    ->capture_default_str();

  VvfArgs vvf;
  vvf_solve_options_default(&vvf.options);
  auto * c_vvf = app.add_subcommand("vvf", "Solve the velocity field of every observed frame");
  auto * o_manifest = c_vvf->add_option("--manifest", vvf.manifest, "manifest from ingest")->check(CLI::ExistingFile);
  c_vvf->add_option("--sample-id", vvf.sample_id, "row of the manifest")->needs(o_manifest);
  auto * o_scenario =
    c_vvf->add_option("--scenario", vvf.scenario, "synthetic scenario file")->check(CLI::ExistingFile);
  o_manifest->excludes(o_scenario);
  c_vvf->add_option("--out", vvf.out, ".vvf file to write")->required();
  c_vvf->add_option("--truth-out", vvf.truth_out, "write the target's future as trajectory CSV");
  c_vvf->add_option("--tau-mode", vvf.options.tau_mode, "viscosity or literal")
    ->transform(CLI::CheckedTransformer(kTauModes, CLI::ignore_case));
  c_vvf->add_option("--nu", vvf.options.relaxation_constant, "viscosity, or tau in literal mode")
    ->capture_default_str();
  c_vvf->add_option("--beta", vvf.options.beta, "porous bounce-back fraction")
    ->capture_default_str()
    ->check(CLI::Range(0.0, 1.0));
  c_vvf->add_option("--u-lattice-max", vvf.options.u_lattice_max, "lattice speed of the fastest boundary")
    ->capture_default_str();
  c_vvf->add_option("--conv-tol", vvf.options.conv_tol, "convergence threshold, m/s")->capture_default_str();
  c_vvf->add_option("--max-iters", vvf.options.max_iters, "iteration cap per frame")->capture_default_str();
  c_vvf->add_flag("--warm-start", vvf.warm_start, "start each frame from the previous solution");
  c_vvf->add_option("--jobs", vvf.options.jobs, "solver threads")->capture_default_str()->check(CLI::PositiveNumber);

  PredictArgs predict;
  auto * c_predict = app.add_subcommand("predict", "Streamline prediction from the last frame of a .vvf");
  c_predict->add_option("--vvf", predict.vvf, ".vvf file")->required()->check(CLI::ExistingFile);
  c_predict->add_option("--out", predict.out, "trajectory CSV to write")->required();
  c_predict->add_option("--steps", predict.steps, "number of 0.2 s steps")->capture_default_str();

  EvalArgs eval;
  auto * c_eval = app.add_subcommand("eval", "RMSE report for predicted against true trajectories");
  c_eval->add_option("--pred", eval.preds, "predicted trajectory CSV (repeatable)")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--truth", eval.truths, "true trajectory CSV (repeatable)")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--out", eval.out, "report CSV to write")->required();

  ExportArgs exp;
  auto * c_export = app.add_subcommand("export-tensors", "Write the per-channel tensor layout of a .vvf");
  c_export->add_option("--vvf", exp.vvf, ".vvf file")->required()->check(CLI::ExistingFile);
  c_export->add_option("--out", exp.out, "tensor file to write")->required();

  BenchArgs bench;
  auto * c_bench = app.add_subcommand("bench", "Solver throughput on a walled channel");
  c_bench->add_option("--dims", bench.dims, "LENGTHxWIDTH in cells")->capture_default_str();
  c_bench->add_option("--iters", bench.iters, "iterations")->capture_default_str()->check(CLI::PositiveNumber);
  c_bench->add_option("--tau-mode", bench.tau_mode, "viscosity or literal")
    ->transform(CLI::CheckedTransformer(kTauModes, CLI::ignore_case));
  c_bench->add_option("--jobs", bench.jobs, "solver threads")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (c_vvf->parsed() && vvf.manifest.empty() && vvf.scenario.empty()) {
    std::fprintf(stderr, "error: vvf needs --manifest or --scenario\n%s", c_vvf->help().c_str());
    return kExitUsage;
  }
  if (c_ingest->parsed()) return run_ingest(ingest);
  if (c_vvf->parsed()) return run_vvf(vvf);
  if (c_predict->parsed()) return run_predict(predict);
  if (c_eval->parsed()) return run_eval(eval);
  if (c_export->parsed()) return run_export(exp);
  return run_bench(bench);
}
