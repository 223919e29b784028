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

#include "evstereo/hpf.hpp"
#include "evstereo/image.hpp"

namespace evstereo {

struct GradientField {
  Image<double> gx;
  Image<double> gy;

  int width() const noexcept { return gx.width(); }
  int height() const noexcept { return gx.height(); }

  double magnitude(int x, int y) const noexcept;
  double squared_magnitude(int x, int y) const noexcept {
    return gx(x, y) * gx(x, y) + gy(x, y) * gy(x, y);
  }
};

inline constexpr double kDefaultFrameEdgeThreshold = 0.05;
inline constexpr double kDefaultEventEdgeThreshold = 0.10;

/// 3x3 Sobel responses with replicate padding. g_x grows left to right,
/// g_y grows top to bottom. Throws DimensionError below 3x3.
GradientField sobel(const Image<double>& img);
GradientField sobel(const IntensityImage& img);

/// Gradient direction quantized to 0, 45, 90 and 135 degrees.
enum class EdgeDirection : std::uint8_t { horizontal, diagonal, vertical, antidiagonal };
EdgeDirection quantize_direction(double gx, double gy) noexcept;

/// Non-maximal suppression against a threshold relative to the global maximum
/// magnitude. A pixel is kept when its magnitude reaches
/// `threshold * max_magnitude` and it beats both neighbors along its quantized
/// gradient direction. Neighbors outside the image count as zero. On equal
/// magnitudes the neighbor earlier in raster order wins, so a two-pixel
/// plateau yields a single-pixel ridge.
///
/// `threshold` must be in (0, 1). An all-zero field gives an all-zero map.
BinaryEdgeMap nms_binarize(const GradientField& grad, double threshold, Modality modality = Modality::frame,
                           double timestamp = 0.0);

/// Luminance-weighted grayscale from separate R, G, B planes.
Image<double> to_grayscale(const Image<double>& r, const Image<double>& g, const Image<double>& b);

BinaryEdgeMap edge_from_events(const HighPassFilter& filter, double t,
                               double threshold = kDefaultEventEdgeThreshold);
BinaryEdgeMap edge_from_reconstruction(const IntensityImage& reconstruction,
                                       double threshold = kDefaultEventEdgeThreshold);
BinaryEdgeMap edge_from_frame(const IntensityImage& frame, double threshold = kDefaultFrameEdgeThreshold);

}  // namespace evstereo
