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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evstereo/config.hpp"
#include "evstereo/events.hpp"
#include "evstereo/image.hpp"
#include "evstereo/metrics.hpp"

namespace evstereo {

struct PipelineInputs {
  std::vector<Event> events;   // event camera, sorted by time
  IntensityImage frame;        // frame camera, linear intensity
  std::optional<DisparityMap> ground_truth;
};

struct PipelineResult {
  double sample_time = 0.0;
  IntensityImage reconstruction;
  BinaryEdgeMap e_b;
  BinaryEdgeMap l_b;
  DisparityMap d_s;  // raw sparse search
  DisparityMap d_p;  // pyramid refinement followed by outlier pruning
  std::optional<MetricReport> report_s;
  std::optional<MetricReport> report_p;
  std::vector<std::string> warnings;
};

/// Events and frame share one rectified pixel grid: the frame extent is the
/// sensor extent. Events after the sample time are ignored.
PipelineResult compute_pipeline(const PipelineConfig& config, const PipelineInputs& inputs);

struct ArtifactOptions {
  bool point_cloud = true;
  bool visualizations = true;
};

// Fixed artifact names inside the output directory.
inline constexpr const char* kSparseDisparityFile = "d_s.pfm";
inline constexpr const char* kPyramidDisparityFile = "d_p.pfm";
inline constexpr const char* kReportCsvFile = "report.csv";
inline constexpr const char* kReportTextFile = "report.txt";
inline constexpr const char* kPointCloudFile = "cloud.ply";

/// Writes d_s.pfm and d_p.pfm, optional color maps (d_s.ppm, d_p.ppm) and edge
/// maps (e_b.pgm, l_b.pgm), cloud.ply from D_p, and report.csv / report.txt
/// when metrics exist. Creates `dir` if needed.
void write_artifacts(const std::filesystem::path& dir, const PipelineConfig& config, const PipelineResult& result,
                     const IntensityImage& frame, const ArtifactOptions& options = {});

struct PipelinePaths {
  std::filesystem::path events;
  std::filesystem::path frame;
  std::optional<std::filesystem::path> ground_truth;
  std::filesystem::path output;
};

/// Reads the inputs, runs compute_pipeline and writes the artifacts.
PipelineResult run_pipeline(const PipelineConfig& config, const PipelinePaths& paths,
                            const ArtifactOptions& options = {});

}  // namespace evstereo
