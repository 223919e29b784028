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

#include "evstereo/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <span>

#include "evstereo/depth.hpp"
#include "evstereo/edges.hpp"
#include "evstereo/hpf.hpp"
#include "evstereo/io.hpp"
#include "evstereo/matcher.hpp"

namespace evstereo {
namespace {

std::optional<MetricReport> try_evaluate(const DisparityMap& est, const DisparityMap& gt, const PipelineConfig& config,
                                         const char* method, std::vector<std::string>& warnings) {
  try {
    auto report = evaluate(est, gt, config.evaluation());
    for (const auto& w : report.warnings) warnings.push_back(std::string(method) + ": " + w);
    return report;
  } catch (const EmptyEvaluationError& e) {
    warnings.push_back(std::string(method) + ": " + e.what());
    return std::nullopt;
  }
}

}  // namespace

PipelineResult compute_pipeline(const PipelineConfig& config, const PipelineInputs& inputs) {
  config.validate();
  const int w = inputs.frame.width();
  const int h = inputs.frame.height();
  if (w < 3 || h < 3) throw DimensionError("pipeline: frame must be at least 3x3");
  if (inputs.ground_truth) require_same_shape(*inputs.ground_truth, inputs.frame, "pipeline ground truth");

  PipelineResult out;
  const auto& events = inputs.events;
  if (events.empty()) {
    out.warnings.push_back("empty event log: event edge map is blank and D_s is all invalid");
  }
  out.sample_time = config.sample_time.value_or(events.empty() ? inputs.frame.timestamp : events.back().t);

  const auto end = std::upper_bound(events.begin(), events.end(), out.sample_time,
                                    [](double t, const Event& e) { return t < e.t; });
  const auto used = static_cast<std::size_t>(end - events.begin());
  if (used < events.size()) {
    out.warnings.push_back(std::to_string(events.size() - used) + " event(s) after the sample time ignored");
  }
  out.reconstruction =
      reconstruct(std::span<const Event>(events.data(), used), SensorGeometry{w, h}, out.sample_time, config.filter);
  out.e_b = edge_from_reconstruction(out.reconstruction, config.event_threshold);
  out.l_b = edge_from_frame(inputs.frame, config.frame_threshold);

  out.d_s = sparse_disparity(out.l_b, out.e_b, config.matcher);
  out.d_p = prune_outliers(pyramid_disparity(out.l_b, out.e_b, config.matcher), config.matcher);

  if (inputs.ground_truth) {
    out.report_s = try_evaluate(out.d_s, *inputs.ground_truth, config, "D_s", out.warnings);
    out.report_p = try_evaluate(out.d_p, *inputs.ground_truth, config, "D_p", out.warnings);
  }
  return out;
}

void write_artifacts(const std::filesystem::path& dir, const PipelineConfig& config, const PipelineResult& result,
                     const IntensityImage& frame, const ArtifactOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  write_pfm(dir / kSparseDisparityFile, result.d_s);
  write_pfm(dir / kPyramidDisparityFile, result.d_p);
  if (options.visualizations) {
    const double lo = config.matcher.d_min;
    const double hi = config.matcher.d_max;
    write_ppm(dir / "d_s.ppm", colorize(result.d_s, lo, hi));
    write_ppm(dir / "d_p.ppm", colorize(result.d_p, lo, hi));
    write_edge_map(dir / "e_b.pgm", result.e_b);
    write_edge_map(dir / "l_b.pgm", result.l_b);
  }
  if (options.point_cloud) {
    // Zero disparity is at infinity; keep only points with finite depth.
    DisparityMap finite = result.d_p;
    for (int y = 0; y < finite.height(); ++y) {
      for (int x = 0; x < finite.width(); ++x) {
        if (finite.is_valid(x, y) && !(finite.at(x, y) > 0.0)) finite.invalidate(x, y);
      }
    }
    write_ply(dir / kPointCloudFile, backproject(disparity_to_depth(finite, config.rig), config.rig, &frame.pixels));
  }
  if (result.report_s || result.report_p) {
    std::ofstream csv(dir / kReportCsvFile);
    std::ofstream text(dir / kReportTextFile);
    if (!csv || !text) throw IoError("cannot write report in " + dir.string());
    csv << report_csv_header() << "\n";
    if (result.report_s) {
      csv << report_csv_row(*result.report_s, config.sequence, "D_s") << "\n";
      write_report_text(text, *result.report_s, config.sequence, "D_s");
    }
    if (result.report_p) {
      csv << report_csv_row(*result.report_p, config.sequence, "D_p") << "\n";
      write_report_text(text, *result.report_p, config.sequence, "D_p");
    }
  }
}

PipelineResult run_pipeline(const PipelineConfig& config, const PipelinePaths& paths, const ArtifactOptions& options) {
  PipelineInputs inputs;
  inputs.frame.pixels = read_grayscale(paths.frame);
  inputs.events = read_events(paths.events, SensorGeometry{inputs.frame.width(), inputs.frame.height()});
  if (paths.ground_truth) inputs.ground_truth = read_pfm(*paths.ground_truth);
  auto result = compute_pipeline(config, inputs);
  write_artifacts(paths.output, config, result, inputs.frame, options);
  return result;
}

}  // namespace evstereo
