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

#include "evstereo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace evstereo {
namespace {

// Visits every evaluated pixel as f(est, gt); returns how many were visited.
template <typename F>
std::size_t for_each_evaluated(const DisparityMap& est, const DisparityMap& gt, int margin, F&& f) {
  require_same_shape(est, gt, "evaluation");
  if (margin < 0) throw ConfigError("evaluation margin must be >= 0");
  std::size_t n = 0;
  const int x_end = est.width() - margin;
  for (int y = 0; y < est.height(); ++y) {
    for (int x = margin; x < x_end; ++x) {
      if (!est.is_valid(x, y) || !gt.is_valid(x, y)) continue;
      f(est.at(x, y), gt.at(x, y));
      ++n;
    }
  }
  if (n == 0) throw EmptyEvaluationError("no jointly valid pixels outside the boundary margin");
  return n;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

Image<std::uint8_t> evaluation_mask(const DisparityMap& est, const DisparityMap& gt, int margin) {
  require_same_shape(est, gt, "evaluation_mask");
  if (margin < 0) throw ConfigError("evaluation margin must be >= 0");
  Image<std::uint8_t> mask(est.width(), est.height(), 0);
  for (int y = 0; y < est.height(); ++y) {
    for (int x = margin; x < est.width() - margin; ++x) {
      mask(x, y) = est.is_valid(x, y) && gt.is_valid(x, y);
    }
  }
  return mask;
}

double rmse(const DisparityMap& est, const DisparityMap& gt, int margin) {
  double sum = 0.0;
  const auto n = for_each_evaluated(est, gt, margin, [&](double e, double g) { sum += (e - g) * (e - g); });
  return std::sqrt(sum / static_cast<double>(n));
}

double bad_p(const DisparityMap& est, const DisparityMap& gt, double abs_thresh, double rel_thresh, int margin) {
  std::size_t bad = 0;
  const auto n = for_each_evaluated(est, gt, margin, [&](double e, double g) {
    const double err = std::abs(e - g);
    bad += err > 0.0 && err >= abs_thresh && err >= rel_thresh * std::abs(g);
  });
  return static_cast<double>(bad) / static_cast<double>(n);
}

DeltaRatios delta_ratios(const DisparityMap& est, const DisparityMap& gt, int margin) {
  DeltaRatios out;
  std::array<std::size_t, 3> hits{};
  const std::array<double, 3> limits{1.25, 1.25 * 1.25, 1.25 * 1.25 * 1.25};
  for_each_evaluated(est, gt, margin, [&](double e, double g) {
    if (!(g > 0.0)) {
      ++out.excluded;
      return;
    }
    ++out.count;
    const double ratio = e > 0.0 ? std::max(e / g, g / e) : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 3; ++i) hits[i] += ratio < limits[i];
  });
  if (out.count == 0) throw EmptyEvaluationError("delta_ratios: every evaluated pixel has non-positive gt");
  for (std::size_t i = 0; i < 3; ++i) out.delta[i] = static_cast<double>(hits[i]) / static_cast<double>(out.count);
  return out;
}

MetricReport evaluate(const DisparityMap& est, const DisparityMap& gt, const EvaluationOptions& options) {
  MetricReport r;
  r.margin = options.margin;
  r.rmse = rmse(est, gt, options.margin);
  r.bad_p = bad_p(est, gt, options.abs_thresh, options.rel_thresh, options.margin);
  const auto d = delta_ratios(est, gt, options.margin);
  r.delta = d.delta;
  r.count = d.count + d.excluded;
  if (d.excluded > 0) {
    r.warnings.push_back(std::to_string(d.excluded) + " pixel(s) with non-positive ground truth excluded from delta");
  }
  return r;
}

std::string report_csv_header() { return "sequence,method,count,rmse,bad_p,delta1,delta2,delta3"; }

std::string report_csv_row(const MetricReport& r, const std::string& sequence, const std::string& method) {
  return sequence + "," + method + "," + std::to_string(r.count) + "," + fixed(r.rmse, 6) + "," + fixed(r.bad_p, 6) +
         "," + fixed(r.delta[0], 6) + "," + fixed(r.delta[1], 6) + "," + fixed(r.delta[2], 6);
}

void write_report_text(std::ostream& out, const MetricReport& r, const std::string& sequence,
                       const std::string& method) {
  out << "[" << sequence << " / " << method << "]\n"
      << "  pixels  " << r.count << " (margin " << r.margin << " px)\n"
      << "  rmse    " << fixed(r.rmse, 4) << " px\n"
      << "  bad-p   " << fixed(100.0 * r.bad_p, 2) << " %\n"
      << "  delta   " << fixed(r.delta[0], 4) << " " << fixed(r.delta[1], 4) << " " << fixed(r.delta[2], 4)
      << "\n";
  for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
}

}  // namespace evstereo
