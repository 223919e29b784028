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

#include "evstereo/hpf.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace evstereo {
namespace {
constexpr double kNever = -std::numeric_limits<double>::infinity();
}

HighPassFilter::HighPassFilter(int width, int height, HighPassParams params)
    : params_(params), value_(width, height, 0.0), last_update_(width, height, kNever), latest_(kNever) {
  if (!(params.cutoff > 0.0) || !std::isfinite(params.cutoff)) throw ConfigError("high-pass cutoff must be > 0");
  if (!(params.contrast > 0.0) || !std::isfinite(params.contrast)) {
    throw ConfigError("contrast threshold must be > 0");
  }
}

void HighPassFilter::update(const Event& e) {
  if (!value_.contains(e.x, e.y)) {
    throw RecordError("event at (" + std::to_string(e.x) + "," + std::to_string(e.y) + ") outside the filter", 0, 0);
  }
  double& last = last_update_(e.x, e.y);
  if (e.t < last) {
    throw OrderingError("event at t=" + std::to_string(e.t) + " precedes last update " + std::to_string(last) +
                        " of pixel (" + std::to_string(e.x) + "," + std::to_string(e.y) + ")");
  }
  double& v = value_(e.x, e.y);
  if (last != kNever) v *= std::exp(-params_.cutoff * (e.t - last));
  v += e.polarity > 0 ? params_.contrast : -params_.contrast;
  last = e.t;
  if (e.t > latest_) latest_ = e.t;
}

void HighPassFilter::update(std::span<const Event> events) {
  for (const auto& e : events) update(e);
}

IntensityImage HighPassFilter::sample(double t) const {
  if (t < latest_) {
    throw OrderingError("sample time " + std::to_string(t) + " precedes latest update " + std::to_string(latest_));
  }
  IntensityImage out(width(), height(), 0.0, t);
  const auto values = value_.pixels();
  const auto stamps = last_update_.pixels();
  auto dst = out.pixels.pixels();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (stamps[i] == kNever) continue;
    const double dt = t - stamps[i];
    dst[i] = dt == 0.0 ? values[i] : values[i] * std::exp(-params_.cutoff * dt);
  }
  return out;
}

IntensityImage reconstruct(std::span<const Event> events, const SensorGeometry& geometry, double t,
                           HighPassParams params) {
  HighPassFilter filter(geometry.width, geometry.height, params);
  filter.update(events);
  return filter.sample(t);
}

}  // namespace evstereo
