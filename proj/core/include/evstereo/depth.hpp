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

#include <cstdint>
#include <vector>

#include "evstereo/image.hpp"

namespace evstereo {

/// Row-rectified stereo pair sharing one pinhole model.
struct StereoRig {
  double baseline = 0.06544;  // meters
  double focal = 555.0;       // pixels
  double cx = 320.0;          // principal point, pixels
  double cy = 240.0;

  /// Throws ConfigError unless baseline and focal are strictly positive.
  void validate() const;

  /// Event-camera intrinsics of the hybrid rig (b = 65.44 mm, f = 555 px).
  static StereoRig event_camera() { return {}; }
  /// Frame-camera focal length of the same rig (f = 1301 px).
  static StereoRig frame_camera() { return {0.06544, 1301.0, 320.0, 240.0}; }
};

/// depth = baseline * focal / disparity at every valid pixel. Throws DomainError
/// on a non-positive valid disparity.
DepthMap disparity_to_depth(const DisparityMap& disparity, const StereoRig& rig);
/// disparity = baseline * focal / depth at every valid pixel.
DisparityMap depth_to_disparity(const DepthMap& depth, const StereoRig& rig);

struct CloudPoint {
  double x = 0.0, y = 0.0, z = 0.0;
  std::uint8_t r = 255, g = 255, b = 255;
};

using PointCloud = std::vector<CloudPoint>;

/// Back-projects every valid depth pixel through the pinhole model into the
/// camera frame. Points take their gray level from `shade` when given.
PointCloud backproject(const DepthMap& depth, const StereoRig& rig, const Image<double>* shade = nullptr);

}  // namespace evstereo
