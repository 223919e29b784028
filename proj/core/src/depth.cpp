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

#include "evstereo/depth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace evstereo {
namespace {

template <typename Out, typename In>
Out reciprocal(const In& in, const StereoRig& rig, const char* what) {
  rig.validate();
  const double bf = rig.baseline * rig.focal;
  Out out(in.width(), in.height());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      if (!in.is_valid(x, y)) continue;
      const double v = in.at(x, y);
      if (!(v > 0.0)) {
        throw DomainError(std::string(what) + ": non-positive value " + std::to_string(v) + " at valid pixel (" +
                          std::to_string(x) + "," + std::to_string(y) + ")");
      }
      out.set(x, y, bf / v);
    }
  }
  return out;
}

}  // namespace

void StereoRig::validate() const {
  if (!(baseline > 0.0)) throw ConfigError("stereo rig baseline must be > 0");
  if (!(focal > 0.0)) throw ConfigError("stereo rig focal length must be > 0");
}

DepthMap disparity_to_depth(const DisparityMap& disparity, const StereoRig& rig) {
  return reciprocal<DepthMap>(disparity, rig, "disparity_to_depth");
}

DisparityMap depth_to_disparity(const DepthMap& depth, const StereoRig& rig) {
  return reciprocal<DisparityMap>(depth, rig, "depth_to_disparity");
}

PointCloud backproject(const DepthMap& depth, const StereoRig& rig, const Image<double>* shade) {
  rig.validate();
  if (shade) require_same_shape(depth, *shade, "backproject");
  PointCloud cloud;
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      if (!depth.is_valid(x, y)) continue;
      const double z = depth.at(x, y);
      CloudPoint p;
      p.x = (x - rig.cx) * z / rig.focal;
      p.y = (y - rig.cy) * z / rig.focal;
      p.z = z;
      if (shade) {
        const auto g = static_cast<std::uint8_t>(std::lround(std::clamp((*shade)(x, y), 0.0, 1.0) * 255.0));
        p.r = p.g = p.b = g;
      }
      cloud.push_back(p);
    }
  }
  return cloud;
}

}  // namespace evstereo
