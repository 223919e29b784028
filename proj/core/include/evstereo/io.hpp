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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "evstereo/depth.hpp"
#include "evstereo/image.hpp"

namespace evstereo {

// PGM (P5) and PPM (P6), 8- or 16-bit. Readers return linear intensity scaled
// to [0, 1]; PPM input is reduced to luminance.
Image<double> read_pgm(std::istream& in);
Image<double> read_pgm(const std::filesystem::path& path);
/// Reads P5 or P6 by magic number.
Image<double> read_grayscale(const std::filesystem::path& path);

/// Values clamped to [0, 1] and quantized to `max_value` (255 or 65535).
void write_pgm(std::ostream& out, const Image<double>& img, int max_value = 255);
void write_pgm(const std::filesystem::path& path, const Image<double>& img, int max_value = 255);

/// Edge masks are written as 8-bit PGM with values {0, 255}.
void write_edge_map(const std::filesystem::path& path, const BinaryEdgeMap& map);
/// Any non-zero pixel becomes an edge.
BinaryEdgeMap read_edge_map(const std::filesystem::path& path, Modality modality = Modality::frame);

using Rgb = std::array<std::uint8_t, 3>;
void write_ppm(const std::filesystem::path& path, const Image<Rgb>& img);

// PFM, single channel ("Pf"), little-endian (scale -1.0), rows stored bottom
// to top. Invalid pixels are encoded as +inf.
void write_pfm(std::ostream& out, const DisparityMap& map);
void write_pfm(const std::filesystem::path& path, const DisparityMap& map);
DisparityMap read_pfm(std::istream& in);
DisparityMap read_pfm(const std::filesystem::path& path);

/// Blue (far, low disparity) to yellow (near) over [lo, hi]; invalid pixels black.
Rgb disparity_color(double disparity, double lo, double hi);
Image<Rgb> colorize(const DisparityMap& map, double lo = 0.0, double hi = 80.0);

/// ASCII PLY with `vertex` x, y, z and optional red/green/blue properties.
PointCloud read_ply(std::istream& in);
PointCloud read_ply(const std::filesystem::path& path);
void write_ply(std::ostream& out, const PointCloud& points);
void write_ply(const std::filesystem::path& path, const PointCloud& points);

}  // namespace evstereo
