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
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "evstereo/calib.hpp"
#include "evstereo/depth.hpp"
#include "evstereo/events.hpp"
#include "evstereo/image.hpp"

namespace evstereo {

/// Fronto-parallel rectangle (left-view coordinates) at a constant disparity.
/// Its content is sampled from `texture` (full-frame layer) or, when absent,
/// from the scene's base image.
struct Region {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  double disparity = 0.0;
  std::optional<Image<double>> texture;
};

/// Layered scene rendered by horizontal shifting only. Intensities are linear
/// in [0, 1].
struct SceneSpec {
  Image<double> base;                 // background layer
  double background_disparity = 0.0;
  std::vector<Region> regions;
  /// Horizontal content motion (pixels) between consecutive right-view frames;
  /// the last frame coincides with the left frame. n offsets give n + 1 frames.
  std::vector<double> motion{1.0, 1.0, 1.0, 1.0, 1.0};
  double frame_rate = 200.0;          // Hz
  double contrast = 0.1;              // log-intensity per event
  int d_min = 0;
  int d_max = 80;

  int width() const noexcept { return base.width(); }
  int height() const noexcept { return base.height(); }

  /// Throws SpecError on out-of-bounds regions, disparities outside
  /// [d_min, d_max], or overlapping regions with different disparities.
  void validate() const;
};

struct StereoPair {
  Image<double> left;
  Image<double> right;
  DisparityMap ground_truth;  // left coordinates; occluded pixels invalid
};

/// Right view: every layer shifted by its disparity (right = left content at
/// x + d), nearer layers on top.
StereoPair synth_stereo_pair(const SceneSpec& spec);

/// Right view with the whole scene additionally translated by `offset` pixels
/// (content that sits at x in the right view appears at x - offset), linearly
/// interpolated for fractional offsets.
Image<double> render_right_view(const SceneSpec& spec, double offset);

inline constexpr double kLogIntensityFloor = 1.0 / 255.0;

/// Threshold-crossing event generation. Per pixel a reference log intensity
/// starts at the first frame; whenever the current frame is at least `c` away
/// from the reference, one event per whole multiple of `c` is emitted with the
/// sign of the change, at times linearly interpolated inside the frame
/// interval. The reference keeps its sub-threshold residual across intervals.
/// Intensities are clamped to `floor` before the log.
std::vector<Event> events_from_frames(std::span<const Image<double>> frames, std::span<const double> timestamps,
                                      double contrast, double floor = kLogIntensityFloor);

/// Pinhole z-buffer: each point is projected into a camera at `camera_pose`
/// (camera in world), rounded to the nearest pixel, and the nearest positive
/// depth per pixel is kept.
DepthMap depth_from_pointcloud(const PointCloud& cloud, const Pose& camera_pose, const StereoRig& rig, int height,
                               int width);

/// Everything a pipeline run needs, with ground truth.
struct SyntheticFixture {
  IntensityImage left;                 // frame camera, at the last frame time
  std::vector<Image<double>> right_frames;
  std::vector<double> timestamps;
  std::vector<Event> events;           // event camera (right view)
  DisparityMap ground_truth;
};

SyntheticFixture make_fixture(const SceneSpec& spec);

// File names inside a fixture directory.
inline constexpr const char* kFixtureEvents = "events.csv";
inline constexpr const char* kFixtureFrame = "left.pgm";
inline constexpr const char* kFixtureRight = "right.pgm";
inline constexpr const char* kFixtureGroundTruth = "gt.pfm";

/// Writes events, the 16-bit left frame, the final right frame and D_GT.
void write_fixture(const std::filesystem::path& dir, const SyntheticFixture& fixture);

struct TextureOptions {
  int disks = 150;
  int min_radius = 4;
  int max_radius = 25;
  /// Gray levels; neighbors differ by at least a factor of two, well above
  /// the event contrast threshold.
  std::vector<double> palette{0.12, 0.25, 0.5, 0.9};
};

/// Deterministic texture of overlapping random disks on a palette background.
Image<double> disk_texture(int width, int height, std::uint64_t seed, const TextureOptions& options = {});

struct RandomSceneOptions {
  int width = 640;
  int height = 480;
  int d_min = 0;
  int d_max = 80;
  double contrast = 0.1;
  TextureOptions texture{};
};

/// Two-layer scene: a textured background and one textured foreground
/// rectangle at a larger disparity, both inside the search range.
SceneSpec random_two_region_scene(std::uint64_t seed, const RandomSceneOptions& options = {});

/// JSON scene description. Image paths resolve relative to the file.
SceneSpec load_scene_spec(const std::filesystem::path& path);

}  // namespace evstereo
