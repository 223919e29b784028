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

#include "evstereo/edges.hpp"

#include <algorithm>
#include <cmath>

namespace evstereo {
namespace {

// tan(22.5 deg)
constexpr double kTanEighthPi = 0.41421356237309504880;

struct Offset {
  int dx;
  int dy;
};

// First entry precedes the pixel in raster order, second follows it.
constexpr Offset kBefore[] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr Offset kAfter[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};

}  // namespace

double GradientField::magnitude(int x, int y) const noexcept { return std::sqrt(squared_magnitude(x, y)); }

GradientField sobel(const Image<double>& img) {
  const int w = img.width();
  const int h = img.height();
  if (w < 3 || h < 3) {
    throw DimensionError("sobel: image must be at least 3x3, got " + std::to_string(w) + "x" + std::to_string(h));
  }
  GradientField g{Image<double>(w, h), Image<double>(w, h)};
  for (int y = 0; y < h; ++y) {
    const int ym = std::max(y - 1, 0);
    const int yp = std::min(y + 1, h - 1);
    const auto up = img.row(ym);
    const auto mid = img.row(y);
    const auto down = img.row(yp);
    auto gx = g.gx.row(y);
    auto gy = g.gy.row(y);
    for (int x = 0; x < w; ++x) {
      const auto xm = static_cast<std::size_t>(std::max(x - 1, 0));
      const auto xc = static_cast<std::size_t>(x);
      const auto xp = static_cast<std::size_t>(std::min(x + 1, w - 1));
      gx[xc] = (up[xp] + 2.0 * mid[xp] + down[xp]) - (up[xm] + 2.0 * mid[xm] + down[xm]);
      gy[xc] = (down[xm] + 2.0 * down[xc] + down[xp]) - (up[xm] + 2.0 * up[xc] + up[xp]);
    }
  }
  return g;
}

GradientField sobel(const IntensityImage& img) { return sobel(img.pixels); }

EdgeDirection quantize_direction(double gx, double gy) noexcept {
  const double ax = std::abs(gx);
  const double ay = std::abs(gy);
  if (ay <= kTanEighthPi * ax) return EdgeDirection::horizontal;
  if (ax <= kTanEighthPi * ay) return EdgeDirection::vertical;
  return (gx > 0) == (gy > 0) ? EdgeDirection::diagonal : EdgeDirection::antidiagonal;
}

BinaryEdgeMap nms_binarize(const GradientField& grad, double threshold, Modality modality, double timestamp) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("nms threshold must be in (0, 1)");
  require_same_shape(grad.gx, grad.gy, "nms_binarize");
  const int w = grad.width();
  const int h = grad.height();

  Image<double> mag2(w, h);
  double max2 = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = grad.squared_magnitude(x, y);
      mag2(x, y) = m;
      max2 = std::max(max2, m);
    }
  }

  BinaryEdgeMap out(w, h, modality, timestamp);
  if (max2 == 0.0) return out;
  const double floor2 = threshold * threshold * max2;

  auto neighbor = [&](int x, int y) { return mag2.contains(x, y) ? mag2(x, y) : 0.0; };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag2(x, y);
      if (m == 0.0 || m < floor2) continue;
      const auto dir = static_cast<std::size_t>(quantize_direction(grad.gx(x, y), grad.gy(x, y)));
      const double before = neighbor(x + kBefore[dir].dx, y + kBefore[dir].dy);
      const double after = neighbor(x + kAfter[dir].dx, y + kAfter[dir].dy);
      if (m > before && m >= after) out(x, y) = 1;
    }
  }
  return out;
}

Image<double> to_grayscale(const Image<double>& r, const Image<double>& g, const Image<double>& b) {
  require_same_shape(r, g, "to_grayscale");
  require_same_shape(r, b, "to_grayscale");
  Image<double> out(r.width(), r.height());
  auto dst = out.pixels();
  const auto rp = r.pixels();
  const auto gp = g.pixels();
  const auto bp = b.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = 0.299 * rp[i] + 0.587 * gp[i] + 0.114 * bp[i];
  return out;
}

BinaryEdgeMap edge_from_events(const HighPassFilter& filter, double t, double threshold) {
  return edge_from_reconstruction(filter.sample(t), threshold);
}

BinaryEdgeMap edge_from_reconstruction(const IntensityImage& reconstruction, double threshold) {
  return nms_binarize(sobel(reconstruction), threshold, Modality::event, reconstruction.timestamp);
}

BinaryEdgeMap edge_from_frame(const IntensityImage& frame, double threshold) {
  return nms_binarize(sobel(frame), threshold, Modality::frame, frame.timestamp);
}

}  // namespace evstereo
