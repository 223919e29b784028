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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "evstereo/image.hpp"

namespace evstereo {

inline constexpr int kDefaultEvaluationMargin = 80;
inline constexpr double kBadPixelAbsolute = 5.0;   // px
inline constexpr double kBadPixelRelative = 0.05;  // fraction of gt

/// Pixels valid in both maps, with `margin` columns dropped on the left and
/// right image borders. Throws DimensionError on a shape mismatch.
Image<std::uint8_t> evaluation_mask(const DisparityMap& est, const DisparityMap& gt,
                                    int margin = kDefaultEvaluationMargin);

// All metrics throw EmptyEvaluationError when the evaluated set is empty.
double rmse(const DisparityMap& est, const DisparityMap& gt, int margin = kDefaultEvaluationMargin);

/// Fraction of evaluated pixels whose error is non-zero and reaches both
/// `abs_thresh` pixels and `rel_thresh * gt`.
double bad_p(const DisparityMap& est, const DisparityMap& gt, double abs_thresh = kBadPixelAbsolute,
             double rel_thresh = kBadPixelRelative, int margin = kDefaultEvaluationMargin);

struct DeltaRatios {
  std::array<double, 3> delta{};  // thresholds 1.25, 1.25^2, 1.25^3
  std::size_t count = 0;          // pixels used
  std::size_t excluded = 0;       // evaluated pixels dropped for gt <= 0
};

/// Fraction of pixels with max(est/gt, gt/est) < 1.25^i. Pixels with
/// non-positive gt are skipped and counted in `excluded`; est <= 0 never
/// passes.
DeltaRatios delta_ratios(const DisparityMap& est, const DisparityMap& gt, int margin = kDefaultEvaluationMargin);

struct EvaluationOptions {
  int margin = kDefaultEvaluationMargin;
  double abs_thresh = kBadPixelAbsolute;
  double rel_thresh = kBadPixelRelative;
};

struct MetricReport {
  double rmse = 0.0;
  double bad_p = 0.0;
  std::array<double, 3> delta{};
  std::size_t count = 0;
  int margin = kDefaultEvaluationMargin;
  std::vector<std::string> warnings;
};

MetricReport evaluate(const DisparityMap& est, const DisparityMap& gt, const EvaluationOptions& options = {});

/// `sequence,method,count,rmse,bad_p,delta1,delta2,delta3`
std::string report_csv_header();
std::string report_csv_row(const MetricReport& report, const std::string& sequence, const std::string& method);
void write_report_text(std::ostream& out, const MetricReport& report, const std::string& sequence,
                       const std::string& method);

}  // namespace evstereo
