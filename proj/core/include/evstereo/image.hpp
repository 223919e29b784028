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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evstereo/errors.hpp"

namespace evstereo {

/// Dense row-major 2D grid. Pixel (x, y) is column x, row y.
template <typename T>
class Image {
public:
  using value_type = T;

  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked(width)) * static_cast<std::size_t>(checked(height)), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  /// Clamped access (replicate padding).
  const T& clamped(int x, int y) const noexcept {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[index(x, y)];
  }

  std::span<T> row(int y) noexcept {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const noexcept {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Image&, const Image&) = default;

private:
  static int checked(int extent) {
    if (extent < 0) throw DimensionError("negative image extent");
    return extent;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()) + ")");
  }
}

/// Real-valued image sampled at a point in time. Event reconstructions are in
/// log-intensity units; frames are linear intensity in [0, 1].
struct IntensityImage {
  Image<double> pixels;
  double timestamp = 0.0;

  IntensityImage() = default;
  IntensityImage(int width, int height, double fill = 0.0, double t = 0.0)
      : pixels(width, height, fill), timestamp(t) {}

  int width() const noexcept { return pixels.width(); }
  int height() const noexcept { return pixels.height(); }
  double& operator()(int x, int y) noexcept { return pixels(x, y); }
  double operator()(int x, int y) const noexcept { return pixels(x, y); }
};

enum class Modality : std::uint8_t { event, frame };

/// {0,1}-valued edge mask (E_b for events, L_b for frames).
struct BinaryEdgeMap {
  Image<std::uint8_t> mask;
  Modality modality = Modality::frame;
  double timestamp = 0.0;

  BinaryEdgeMap() = default;
  BinaryEdgeMap(int width, int height, Modality m = Modality::frame, double t = 0.0)
      : mask(width, height, 0), modality(m), timestamp(t) {}

  int width() const noexcept { return mask.width(); }
  int height() const noexcept { return mask.height(); }
  std::uint8_t& operator()(int x, int y) noexcept { return mask(x, y); }
  std::uint8_t operator()(int x, int y) const noexcept { return mask(x, y); }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto v : mask.pixels()) n += v;
    return n;
  }
};

struct DisparityTag {};
struct DepthTag {};

/// Real-valued map with a per-pixel validity mask. Values at invalid pixels are
/// unspecified and must not be read.
template <typename Tag>
struct MaskedMap {
  Image<double> value;
  Image<std::uint8_t> valid;

  MaskedMap() = default;
  MaskedMap(int width, int height) : value(width, height, 0.0), valid(width, height, 0) {}

  int width() const noexcept { return value.width(); }
  int height() const noexcept { return value.height(); }

  bool is_valid(int x, int y) const noexcept { return valid(x, y) != 0; }
  double at(int x, int y) const noexcept { return value(x, y); }

  void set(int x, int y, double v) noexcept {
    value(x, y) = v;
    valid(x, y) = 1;
  }
  void invalidate(int x, int y) noexcept { valid(x, y) = 0; }

  std::size_t valid_count() const noexcept {
    std::size_t n = 0;
    for (auto v : valid.pixels()) n += (v != 0);
    return n;
  }
};

/// Horizontal disparity in pixels (D_s, D_p, D_GT).
using DisparityMap = MaskedMap<DisparityTag>;
/// Metric depth along the optical axis, meters.
using DepthMap = MaskedMap<DepthTag>;

}  // namespace evstereo
