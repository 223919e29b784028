// Copyright 2026 The evstereo Authors
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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evstereo/calib.hpp"
#include "evstereo/config.hpp"
#include "evstereo/edges.hpp"
#include "evstereo/hpf.hpp"
#include "evstereo/io.hpp"
#include "evstereo/matcher.hpp"
#include "evstereo/metrics.hpp"
#include "evstereo/pipeline.hpp"
#include "evstereo/synth.hpp"

namespace fs = std::filesystem;
using namespace evstereo;

namespace {

// Config-file path plus flag overrides, applied in that order.
struct Settings {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> overrides;

  PipelineConfig resolve() const {
    PipelineConfig cfg = config_file.empty() ? PipelineConfig{} : load_config(config_file);
    for (const auto& [k, v] : overrides) apply_config_value(cfg, k, v);
    cfg.validate();
    return cfg;
  }
};

void add_value(CLI::App* app, Settings& s, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(flag, [&s, key](const std::string& v) { s.overrides.emplace_back(key, v); },
                                        help);
}

void add_config_option(CLI::App* app, Settings& s) {
  app->add_option("--config", s.config_file, "key = value config file")->check(CLI::ExistingFile);
}

void add_matcher_flags(CLI::App* app, Settings& s) {
  add_value(app, s, "--window-radius", "window_radius", "match window half-extent r (window is 2r+1 square)");
  add_value(app, s, "--d-min", "d_min", "smallest disparity searched");
  add_value(app, s, "--d-max", "d_max", "largest disparity searched");
  add_value(app, s, "--lambda", "lambda", "cost weight (negative)");
  add_value(app, s, "--min-overlap", "min_overlap", "co-active pixels required for a match");
  add_value(app, s, "--levels", "levels", "pyramid levels");
  add_value(app, s, "--scale", "scale", "pyramid scale factor in (0, 1)");
  add_value(app, s, "--fusion", "fusion", "average | prefer_local");
  add_value(app, s, "--support-radius", "support_radius", "outlier support radius (px)");
  add_value(app, s, "--support-tolerance", "support_tolerance", "outlier support tolerance (px)");
  add_value(app, s, "--support-count", "support_count", "neighbors required to keep a pixel");
  app->add_flag_callback("--mirror", [&s] { s.overrides.emplace_back("mirror", "true"); },
                         "search E_b at x - dx instead of x + dx");
}

void add_filter_flags(CLI::App* app, Settings& s) {
  add_value(app, s, "--cutoff", "cutoff", "high-pass cutoff alpha (rad/s)");
  add_value(app, s, "--contrast", "contrast", "log-intensity step per event");
  add_value(app, s, "--event-threshold", "event_threshold", "relative NMS threshold for E_b");
  add_value(app, s, "--time", "sample_time", "reconstruction time (s); defaults to the last event");
}

void add_eval_flags(CLI::App* app, Settings& s) {
  add_value(app, s, "--margin", "margin", "boundary-exclusion margin (px); defaults to d_max");
  add_value(app, s, "--bad-abs", "bad_abs", "bad-pixel absolute threshold (px)");
  add_value(app, s, "--bad-rel", "bad_rel", "bad-pixel relative threshold (fraction)");
  add_value(app, s, "--sequence", "sequence", "sequence name in reports");
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

fs::path ensure_dir(const std::string& dir) {
  fs::create_directories(dir);
  return dir;
}

DisparityMap as_map(const Image<double>& img) {
  DisparityMap m(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) m.set(x, y, img(x, y));
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event/frame stereo matching toolkit"};
  app.require_subcommand(1);
  Settings settings;

  // reconstruct
  std::string events_path, out_dir, like_path;
  int width = 0, height = 0;
  auto* rec = app.add_subcommand("reconstruct", "event log -> high-pass reconstruction and edge map E_b");
  rec->add_option("--events", events_path, "event log (.csv, .bin)")->required()->check(CLI::ExistingFile);
  rec->add_option("--width", width, "sensor width (px)");
  rec->add_option("--height", height, "sensor height (px)");
  rec->add_option("--like", like_path, "take the sensor extent from this image")->check(CLI::ExistingFile);
  rec->add_option("--out", out_dir, "output directory")->required();
  add_config_option(rec, settings);
  add_filter_flags(rec, settings);

  // match
  std::string left_path, right_path;
  bool no_viz = false;
  auto* match = app.add_subcommand("match", "edge maps L_b, E_b -> D_s and D_p");
  match->add_option("--left", left_path, "frame edge map L_b (PGM)")->required()->check(CLI::ExistingFile);
  match->add_option("--right", right_path, "event edge map E_b (PGM)")->required()->check(CLI::ExistingFile);
  match->add_option("--out", out_dir, "output directory")->required();
  match->add_flag("--no-viz", no_viz, "skip color maps");
  add_config_option(match, settings);
  add_matcher_flags(match, settings);

  // eval
  std::string est_path, gt_path, method = "estimate";
  auto* eval = app.add_subcommand("eval", "estimated vs ground-truth disparity -> RMSE, bad-p, delta");
  eval->add_option("--est", est_path, "estimated disparity (PFM)")->required()->check(CLI::ExistingFile);
  eval->add_option("--gt", gt_path, "ground-truth disparity (PFM)")->required()->check(CLI::ExistingFile);
  eval->add_option("--method", method, "method name in reports");
  eval->add_option("--out", out_dir, "write report.csv here");
  add_config_option(eval, settings);
  add_eval_flags(eval, settings);
  add_value(eval, settings, "--d-max", "d_max", "search range upper bound (default margin)");

  // synth
  std::string scene_path;
  std::uint64_t seed = 1;
  RandomSceneOptions scene_opts;
  auto* synth = app.add_subcommand("synth", "scene description -> synthetic fixture directory");
  synth->add_option("--scene", scene_path, "JSON scene description")->check(CLI::ExistingFile);
  synth->add_option("--seed", seed, "seed of a random two-region scene (when --scene is absent)");
  synth->add_option("--width", scene_opts.width, "random scene width");
  synth->add_option("--height", scene_opts.height, "random scene height");
  synth->add_option("--out", out_dir, "fixture directory")->required();

  // handeye
  std::string hand_path, camera_path, pairing = "consecutive";
  HandEyeOptions he_opts;
  auto* he = app.add_subcommand("handeye", "hand and camera pose logs -> hand-eye transform X");
  he->add_option("--hand", hand_path, "end-effector poses in the robot base frame")->required()->check(CLI::ExistingFile);
  he->add_option("--camera", camera_path, "camera poses in the target frame")->required()->check(CLI::ExistingFile);
  he->add_option("--pairing", pairing, "consecutive | all")->check(CLI::IsMember({"consecutive", "all"}));
  he->add_option("--angle-tolerance", he_opts.angle_tolerance, "rotation-angle mismatch warning level (rad)");
  he->add_option("--out", out_dir, "write handeye.txt here");

  // pipeline
  std::string fixture_dir, frame_path;
  bool no_cloud = false;
  auto* pipe = app.add_subcommand("pipeline", "events + frame -> D_s, D_p, point cloud and metrics");
  pipe->add_option("--fixture", fixture_dir, "fixture directory written by `synth`")->check(CLI::ExistingDirectory);
  pipe->add_option("--events", events_path, "event log")->check(CLI::ExistingFile);
  pipe->add_option("--frame", frame_path, "frame (PGM or PPM)")->check(CLI::ExistingFile);
  pipe->add_option("--gt", gt_path, "ground-truth disparity (PFM)")->check(CLI::ExistingFile);
  pipe->add_option("--out", out_dir, "output directory")->required();
  pipe->add_flag("--no-cloud", no_cloud, "skip cloud.ply");
  pipe->add_flag("--no-viz", no_viz, "skip color and edge maps");
  add_config_option(pipe, settings);
  add_matcher_flags(pipe, settings);
  add_filter_flags(pipe, settings);
  add_value(pipe, settings, "--frame-threshold", "frame_threshold", "relative NMS threshold for L_b");
  add_value(pipe, settings, "--baseline", "baseline", "stereo baseline (m)");
  add_value(pipe, settings, "--focal", "focal", "focal length (px)");
  add_eval_flags(pipe, settings);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rec) {
      const auto cfg = settings.resolve();
      SensorGeometry geometry = cfg.geometry;
      if (!like_path.empty()) {
        const auto img = read_grayscale(like_path);
        geometry = {img.width(), img.height()};
      }
      if (width > 0) geometry.width = width;
      if (height > 0) geometry.height = height;
      const auto events = read_events(events_path, geometry);
      if (events.empty()) std::cerr << "warning: empty event log\n";
      const double t = cfg.sample_time.value_or(events.empty() ? 0.0 : events.back().t);
      const auto recon = reconstruct(events, geometry, t, cfg.filter);
      const auto e_b = edge_from_reconstruction(recon, cfg.event_threshold);
      const auto dir = ensure_dir(out_dir);
      write_pfm(dir / "reconstruction.pfm", as_map(recon.pixels));
      write_edge_map(dir / "e_b.pgm", e_b);
      std::cout << events.size() << " events, t = " << t << " s, " << e_b.count() << " edge pixels\n";
    } else if (*match) {
      const auto cfg = settings.resolve();
      const auto l_b = read_edge_map(left_path, Modality::frame);
      const auto e_b = read_edge_map(right_path, Modality::event);
      const auto d_s = sparse_disparity(l_b, e_b, cfg.matcher);
      const auto d_p = prune_outliers(pyramid_disparity(l_b, e_b, cfg.matcher), cfg.matcher);
      const auto dir = ensure_dir(out_dir);
      write_pfm(dir / kSparseDisparityFile, d_s);
      write_pfm(dir / kPyramidDisparityFile, d_p);
      if (!no_viz) {
        write_ppm(dir / "d_s.ppm", colorize(d_s, cfg.matcher.d_min, cfg.matcher.d_max));
        write_ppm(dir / "d_p.ppm", colorize(d_p, cfg.matcher.d_min, cfg.matcher.d_max));
      }
      std::cout << "D_s " << d_s.valid_count() << " px, D_p " << d_p.valid_count() << " px\n";
    } else if (*eval) {
      const auto cfg = settings.resolve();
      const auto report = evaluate(read_pfm(est_path), read_pfm(gt_path), cfg.evaluation());
      write_report_text(std::cout, report, cfg.sequence, method);
      print_warnings(report.warnings);
      if (!out_dir.empty()) {
        std::ofstream csv(ensure_dir(out_dir) / kReportCsvFile);
        csv << report_csv_header() << "\n" << report_csv_row(report, cfg.sequence, method) << "\n";
        if (!csv) throw IoError("cannot write " + (fs::path(out_dir) / kReportCsvFile).string());
      }
    } else if (*synth) {
      const auto spec = scene_path.empty() ? random_two_region_scene(seed, scene_opts) : load_scene_spec(scene_path);
      const auto fixture = make_fixture(spec);
      write_fixture(out_dir, fixture);
      std::cout << spec.width() << "x" << spec.height() << ", " << fixture.events.size() << " events, "
                << fixture.ground_truth.valid_count() << " ground-truth pixels\n";
    } else if (*he) {
      const auto hand = read_pose_log(hand_path);
      const auto camera = read_pose_log(camera_path);
      std::vector<Pose> hp, cp;
      for (const auto& p : hand) hp.push_back(p.pose);
      for (const auto& p : camera) cp.push_back(p.pose);
      const auto pairs = make_motion_pairs(hp, cp, pairing == "all" ? Pairing::all : Pairing::consecutive);
      const auto result = solve_hand_eye(pairs, he_opts);
      write_hand_eye_report(std::cout, result);
      if (!out_dir.empty()) {
        std::ofstream out(ensure_dir(out_dir) / "handeye.txt");
        write_hand_eye_report(out, result);
        if (!out) throw IoError("cannot write handeye.txt");
      }
    } else if (*pipe) {
      const auto cfg = settings.resolve();
      PipelinePaths paths;
      if (!fixture_dir.empty()) {
        const fs::path f = fixture_dir;
        paths.events = f / kFixtureEvents;
        paths.frame = f / kFixtureFrame;
        if (fs::exists(f / kFixtureGroundTruth)) paths.ground_truth = f / kFixtureGroundTruth;
      }
      if (!events_path.empty()) paths.events = events_path;
      if (!frame_path.empty()) paths.frame = frame_path;
      if (!gt_path.empty()) paths.ground_truth = fs::path(gt_path);
      if (paths.events.empty() || paths.frame.empty()) {
        std::cerr << "pipeline: --events and --frame (or --fixture) are required\n";
        return 2;
      }
      paths.output = out_dir;
      ArtifactOptions opts;
      opts.point_cloud = !no_cloud;
      opts.visualizations = !no_viz;
      const auto result = run_pipeline(cfg, paths, opts);
      print_warnings(result.warnings);
      std::cout << "t = " << result.sample_time << " s, E_b " << result.e_b.count() << " px, L_b "
                << result.l_b.count() << " px, D_s " << result.d_s.valid_count() << " px, D_p "
                << result.d_p.valid_count() << " px\n";
      if (result.report_s) write_report_text(std::cout, *result.report_s, cfg.sequence, "D_s");
      if (result.report_p) write_report_text(std::cout, *result.report_p, cfg.sequence, "D_p");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
