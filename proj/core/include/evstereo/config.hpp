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
#include <iosfwd>
#include <optional>
#include <string>

#include "evstereo/depth.hpp"
#include "evstereo/edges.hpp"
#include "evstereo/events.hpp"
#include "evstereo/hpf.hpp"
#include "evstereo/matcher.hpp"
#include "evstereo/metrics.hpp"

namespace evstereo {

struct PipelineConfig {
  MatcherConfig matcher;
  HighPassParams filter;
  double event_threshold = kDefaultEventEdgeThreshold;
  double frame_threshold = kDefaultFrameEdgeThreshold;
  SensorGeometry geometry;
  StereoRig rig;
  /// Reconstruction time; the last event time when unset.
  std::optional<double> sample_time;
  /// Boundary-exclusion margin; d_max when unset.
  std::optional<int> margin;
  double bad_abs = kBadPixelAbsolute;
  double bad_rel = kBadPixelRelative;
  std::string sequence = "sequence";

  int effective_margin() const { return margin.value_or(matcher.d_max); }
  EvaluationOptions evaluation() const { return {effective_margin(), bad_abs, bad_rel}; }

  /// Throws ConfigError on any invalid field.
  void validate() const;
};

/// Sets one field by its config-file key. Throws ConfigError for unknown keys
/// and unparsable values.
void apply_config_value(PipelineConfig& config, const std::string& key, const std::string& value);

/// Plain-text `key = value` lines; `#` starts a comment. Errors are reported as
/// ParseError with the offending line number.
PipelineConfig parse_config(std::istream& in, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

/// Writes every key in a form parse_config reads back.
void write_config(std::ostream& out, const PipelineConfig& config);

}  // namespace evstereo
