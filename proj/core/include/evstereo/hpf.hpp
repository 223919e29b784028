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

#include <span>

#include "evstereo/events.hpp"
#include "evstereo/image.hpp"

namespace evstereo {

struct HighPassParams {
  double cutoff = 120.0;    // alpha, rad/s
  double contrast = 0.1;    // c, log-intensity per event
};

/// Per-pixel continuous-time high-pass filter driven by events.
///
/// Between events a pixel decays as value * exp(-alpha * dt); each event adds
/// polarity * c. The filter is linear and pixels are independent, so a
/// reconstruction at time t keeps only recent (edge) structure. Pixels that
/// never received an event have last-update time -inf and value 0.
class HighPassFilter {
public:
  HighPassFilter(int width, int height, HighPassParams params = {});

  int width() const noexcept { return value_.width(); }
  int height() const noexcept { return value_.height(); }
  const HighPassParams& params() const noexcept { return params_; }

  /// Throws RecordError for out-of-bounds coordinates and OrderingError if
  /// `e.t` precedes the pixel's last update.
  void update(const Event& e);
  void update(std::span<const Event> events);

  /// Decayed image at time `t`; the filter is not modified. Throws
  /// OrderingError if any pixel was updated after `t`.
  IntensityImage sample(double t) const;

  double value(int x, int y) const { return value_(x, y); }
  double last_update(int x, int y) const { return last_update_(x, y); }
  /// Latest update time over all pixels (-inf before the first event).
  double latest_update() const noexcept { return latest_; }

private:
  HighPassParams params_;
  Image<double> value_;
  Image<double> last_update_;
  double latest_;
};

/// Runs a fresh filter over `events` and samples it at `t`.
IntensityImage reconstruct(std::span<const Event> events, const SensorGeometry& geometry, double t,
                           HighPassParams params = {});

}  // namespace evstereo
