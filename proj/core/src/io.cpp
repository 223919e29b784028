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

#include "evstereo/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace evstereo {
namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  int c = 0;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  if (token.empty()) throw IoError("truncated image header");
  return token;
}

int header_int(std::istream& in) {
  const auto token = header_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size()) throw IoError("bad image header field '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    throw IoError("bad image header field '" + token + "'");
  }
}

struct Pnm {
  int channels = 1;
  int width = 0;
  int height = 0;
  int max_value = 255;
};

Pnm read_pnm_header(std::istream& in) {
  const auto magic = header_token(in);
  Pnm h;
  if (magic == "P5") {
    h.channels = 1;
  } else if (magic == "P6") {
    h.channels = 3;
  } else {
    throw IoError("unsupported image format '" + magic + "' (expected P5 or P6)");
  }
  h.width = header_int(in);
  h.height = header_int(in);
  h.max_value = header_int(in);
  if (h.width <= 0 || h.height <= 0) throw IoError("image has non-positive size");
  if (h.max_value <= 0 || h.max_value > 65535) throw IoError("image max value out of range");
  return h;
}

Image<double> read_pnm(std::istream& in) {
  const auto h = read_pnm_header(in);
  const int bytes = h.max_value > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height) *
                        static_cast<std::size_t>(h.channels);
  std::vector<unsigned char> raw(n * static_cast<std::size_t>(bytes));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw IoError("truncated image data");

  auto sample = [&](std::size_t i) -> double {
    const unsigned v = bytes == 2 ? (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1] : raw[i];
    return static_cast<double>(v) / h.max_value;
  };
  Image<double> img(h.width, h.height);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (h.channels == 1) {
      px[i] = sample(i);
    } else {
      px[i] = 0.299 * sample(3 * i) + 0.587 * sample(3 * i + 1) + 0.114 * sample(3 * i + 2);
    }
  }
  return img;
}

float byteswap(float v) {
  std::uint32_t bits = 0;
  std::memcpy(&bits, &v, sizeof bits);
  bits = ((bits & 0xff) << 24) | ((bits & 0xff00) << 8) | ((bits >> 8) & 0xff00) | (bits >> 24);
  std::memcpy(&v, &bits, sizeof bits);
  return v;
}

float to_le_float(float v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return byteswap(v);
}

}  // namespace

Image<double> read_pgm(std::istream& in) {
  const auto pos = in.tellg();
  const auto magic = header_token(in);
  if (magic != "P5") throw IoError("expected a P5 PGM image, got '" + magic + "'");
  in.seekg(pos);
  return read_pnm(in);
}

Image<double> read_pgm(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_pgm(in);
}

Image<double> read_grayscale(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_pnm(in);
}

void write_pgm(std::ostream& out, const Image<double>& img, int max_value) {
  if (max_value != 255 && max_value != 65535) throw IoError("PGM max value must be 255 or 65535");
  out << "P5\n" << img.width() << ' ' << img.height() << '\n' << max_value << '\n';
  for (const double v : img.pixels()) {
    const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * max_value));
    if (max_value > 255) out.put(static_cast<char>((q >> 8) & 0xff));
    out.put(static_cast<char>(q & 0xff));
  }
}

void write_pgm(const std::filesystem::path& path, const Image<double>& img, int max_value) {
  auto out = open_out(path);
  write_pgm(out, img, max_value);
}

void write_edge_map(const std::filesystem::path& path, const BinaryEdgeMap& map) {
  auto out = open_out(path);
  out << "P5\n" << map.width() << ' ' << map.height() << "\n255\n";
  for (const auto v : map.mask.pixels()) out.put(static_cast<char>(v ? 255 : 0));
}

BinaryEdgeMap read_edge_map(const std::filesystem::path& path, Modality modality) {
  const auto img = read_grayscale(path);
  BinaryEdgeMap map(img.width(), img.height(), modality);
  const auto src = img.pixels();
  auto dst = map.mask.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > 0.0 ? 1 : 0;
  return map;
}

void write_ppm(const std::filesystem::path& path, const Image<Rgb>& img) {
  auto out = open_out(path);
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  for (const auto& c : img.pixels()) out.write(reinterpret_cast<const char*>(c.data()), 3);
}

void write_pfm(std::ostream& out, const DisparityMap& map) {
  out << "Pf\n" << map.width() << ' ' << map.height() << "\n-1.0\n";
  std::vector<float> row(static_cast<std::size_t>(map.width()));
  for (int y = map.height() - 1; y >= 0; --y) {
    for (int x = 0; x < map.width(); ++x) {
      const float v = map.is_valid(x, y) ? static_cast<float>(map.at(x, y)) : std::numeric_limits<float>::infinity();
      row[static_cast<std::size_t>(x)] = to_le_float(v);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
}

void write_pfm(const std::filesystem::path& path, const DisparityMap& map) {
  auto out = open_out(path);
  write_pfm(out, map);
}

DisparityMap read_pfm(std::istream& in) {
  const auto magic = header_token(in);
  if (magic != "Pf") throw IoError("expected a single-channel PFM ('Pf'), got '" + magic + "'");
  const int w = header_int(in);
  const int h = header_int(in);
  const auto scale_token = header_token(in);
  double scale = 0.0;
  try {
    scale = std::stod(scale_token);
  } catch (const std::logic_error&) {
    throw IoError("bad PFM scale '" + scale_token + "'");
  }
  if (w <= 0 || h <= 0 || scale == 0.0) throw IoError("bad PFM header");
  const bool little = scale < 0.0;
  const bool swap = little != (std::endian::native == std::endian::little);

  DisparityMap map(w, h);
  std::vector<float> row(static_cast<std::size_t>(w));
  for (int y = h - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != row.size() * sizeof(float)) throw IoError("truncated PFM data");
    for (int x = 0; x < w; ++x) {
      float v = row[static_cast<std::size_t>(x)];
      if (swap) v = byteswap(v);
      if (std::isfinite(v)) map.set(x, y, v);
    }
  }
  return map;
}

DisparityMap read_pfm(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_pfm(in);
}

Rgb disparity_color(double disparity, double lo, double hi) {
  struct Stop {
    double at;
    double r, g, b;
  };
  static constexpr Stop stops[] = {
      {0.00, 53, 42, 135}, {0.25, 18, 125, 216}, {0.50, 33, 177, 170}, {0.75, 165, 190, 106}, {1.00, 249, 251, 14},
  };
  const double span = hi > lo ? hi - lo : 1.0;
  const double u = std::clamp((disparity - lo) / span, 0.0, 1.0);
  std::size_t i = 1;
  while (i + 1 < std::size(stops) && u > stops[i].at) ++i;
  const auto& a = stops[i - 1];
  const auto& b = stops[i];
  const double f = (u - a.at) / (b.at - a.at);
  auto mix = [f](double p, double q) { return static_cast<std::uint8_t>(std::lround(p + f * (q - p))); };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

Image<Rgb> colorize(const DisparityMap& map, double lo, double hi) {
  Image<Rgb> out(map.width(), map.height(), Rgb{0, 0, 0});
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.is_valid(x, y)) out(x, y) = disparity_color(map.at(x, y), lo, hi);
    }
  }
  return out;
}

PointCloud read_ply(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) throw IoError("not a PLY file");
  std::size_t vertices = 0;
  std::vector<std::string> properties;
  bool in_vertex = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream words(line);
    std::string key;
    words >> key;
    if (key == "format") {
      std::string kind;
      words >> kind;
      if (kind != "ascii") throw IoError("only ASCII PLY is supported, got '" + kind + "'");
    } else if (key == "element") {
      std::string name;
      words >> name;
      in_vertex = name == "vertex";
      if (in_vertex) words >> vertices;
    } else if (key == "property" && in_vertex) {
      std::string type, name;
      words >> type >> name;
      properties.push_back(name);
    } else if (key == "end_header") {
      break;
    }
  }
  auto index_of = [&](const char* name) -> int {
    const auto it = std::find(properties.begin(), properties.end(), name);
    return it == properties.end() ? -1 : static_cast<int>(it - properties.begin());
  };
  const int ix = index_of("x"), iy = index_of("y"), iz = index_of("z");
  const int ir = index_of("red"), ig = index_of("green"), ib = index_of("blue");
  if (ix < 0 || iy < 0 || iz < 0) throw IoError("PLY vertex element lacks x/y/z");

  PointCloud points;
  points.reserve(vertices);
  std::vector<double> values(properties.size());
  for (std::size_t n = 0; n < vertices; ++n) {
    if (!std::getline(in, line)) throw IoError("PLY ended after " + std::to_string(n) + " vertices");
    std::istringstream fields(line);
    for (auto& v : values) {
      if (!(fields >> v)) throw IoError("bad PLY vertex line " + std::to_string(n));
    }
    CloudPoint p;
    p.x = values[static_cast<std::size_t>(ix)];
    p.y = values[static_cast<std::size_t>(iy)];
    p.z = values[static_cast<std::size_t>(iz)];
    if (ir >= 0 && ig >= 0 && ib >= 0) {
      p.r = static_cast<std::uint8_t>(values[static_cast<std::size_t>(ir)]);
      p.g = static_cast<std::uint8_t>(values[static_cast<std::size_t>(ig)]);
      p.b = static_cast<std::uint8_t>(values[static_cast<std::size_t>(ib)]);
    }
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw IoError("PLY vertex " + std::to_string(n) + " has non-finite coordinates");
    }
    points.push_back(p);
  }
  return points;
}

PointCloud read_ply(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_ply(in);
}

void write_ply(std::ostream& out, const PointCloud& points) {
  out << "ply\nformat ascii 1.0\nelement vertex " << points.size()
      << "\nproperty float x\nproperty float y\nproperty float z\n"
         "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
  out.precision(9);
  for (const auto& p : points) {
    out << p.x << ' ' << p.y << ' ' << p.z << ' ' << int{p.r} << ' ' << int{p.g} << ' ' << int{p.b} << '\n';
  }
}

void write_ply(const std::filesystem::path& path, const PointCloud& points) {
  auto out = open_out(path);
  write_ply(out, points);
}

}  // namespace evstereo
