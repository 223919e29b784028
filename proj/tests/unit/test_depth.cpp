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

#include <gtest/gtest.h>

#include <random>

#include "evstereo/depth.hpp"

using namespace evstereo;

TEST(Depth, EventCameraExample) {
  DepthMap z(1, 1);
  z.set(0, 0, 1.5);
  const auto d = depth_to_disparity(z, StereoRig::event_camera());
  EXPECT_NEAR(d.at(0, 0), 0.06544 * 555.0 / 1.5, 1e-12);
  EXPECT_NEAR(d.at(0, 0), 24.2128, 1e-9);
}

TEST(Depth, FrameCameraFocal) {
  EXPECT_EQ(StereoRig::frame_camera().focal, 1301.0);
  EXPECT_EQ(StereoRig::frame_camera().baseline, 0.06544);
}

TEST(Depth, RoundTripIsIdentity) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 90.0);
  std::bernoulli_distribution on(0.7);
  const StereoRig rig;
  DisparityMap d(64, 48);
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (on(rng)) d.set(x, y, u(rng));
    }
  }
  const auto back = depth_to_disparity(disparity_to_depth(d, rig), rig);
  EXPECT_EQ(back.valid, d.valid);
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (d.is_valid(x, y)) EXPECT_NEAR(back.at(x, y), d.at(x, y), 1e-12 * d.at(x, y));
    }
  }
}

TEST(Depth, FarLimitGoesToZeroDisparity) {
  DepthMap z(1, 1);
  z.set(0, 0, 1e12);
  EXPECT_LT(depth_to_disparity(z, StereoRig{}).at(0, 0), 1e-10);
}

TEST(Depth, NonPositiveValidValueIsDomainError) {
  DisparityMap d(3, 1);
  d.set(0, 0, 2.0);
  d.set(1, 0, 0.0);
  EXPECT_THROW(disparity_to_depth(d, StereoRig{}), DomainError);
  d.set(1, 0, -3.0);
  EXPECT_THROW(disparity_to_depth(d, StereoRig{}), DomainError);
  d.invalidate(1, 0);
  EXPECT_NO_THROW(disparity_to_depth(d, StereoRig{}));
}

TEST(Depth, RigValidation) {
  EXPECT_THROW((StereoRig{0.0, 555.0, 0.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((StereoRig{0.1, -1.0, 0.0, 0.0}.validate()), ConfigError);
}

TEST(Backproject, PinholeModel) {
  const StereoRig rig{0.06544, 500.0, 4.0, 3.0};
  DepthMap z(8, 6);
  z.set(4, 3, 2.0);
  z.set(6, 1, 4.0);
  Image<double> shade(8, 6, 0.5);
  const auto cloud = backproject(z, rig, &shade);
  ASSERT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud[0].x, (6 - 4.0) * 4.0 / 500.0);
  EXPECT_EQ(cloud[0].y, (1 - 3.0) * 4.0 / 500.0);
  EXPECT_EQ(cloud[0].z, 4.0);
  EXPECT_EQ(cloud[1].x, 0.0);
  EXPECT_EQ(cloud[1].y, 0.0);
  EXPECT_EQ(cloud[1].z, 2.0);
  EXPECT_EQ(cloud[1].r, 128);
}
