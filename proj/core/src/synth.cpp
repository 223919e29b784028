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

#include "evstereo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "evstereo/io.hpp"

namespace evstereo {
namespace {

constexpr int kBackground = -1;

// Linear interpolation along x with replicate padding.
double sample_row(const Image<double>& img, double x, int y) {
  const double clamped = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  const int x0 = static_cast<int>(std::floor(clamped));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const double f = clamped - x0;
  return f == 0.0 ? img(x0, y) : (1.0 - f) * img(x0, y) + f * img(x1, y);
}

const Image<double>& layer_texture(const SceneSpec& spec, int layer) {
  if (layer == kBackground) return spec.base;
  const auto& region = spec.regions[static_cast<std::size_t>(layer)];
  return region.texture ? *region.texture : spec.base;
}

double layer_disparity(const SceneSpec& spec, int layer) {
  return layer == kBackground ? spec.background_disparity : spec.regions[static_cast<std::size_t>(layer)].disparity;
}

bool region_contains(const Region& r, double x, int y) {
  return y >= r.y && y < r.y + r.height && x >= r.x && x < r.x + r.width;
}

// Layer visible at right-view position (xr, y): the nearest (largest
// disparity) layer whose source pixel lands there.
int visible_layer(const SceneSpec& spec, double xr, int y) {
  int best = kBackground;
  double best_d = spec.background_disparity;
  for (std::size_t i = 0; i < spec.regions.size(); ++i) {
    const auto& r = spec.regions[i];
    if (region_contains(r, xr - r.disparity, y) && (best == kBackground || r.disparity > best_d)) {
      best = static_cast<int>(i);
      best_d = r.disparity;
    }
  }
  return best;
}

// Layer seen at a left-view pixel.
int left_layer(const SceneSpec& spec, int x, int y) {
  int best = kBackground;
  for (std::size_t i = 0; i < spec.regions.size(); ++i) {
    if (region_contains(spec.regions[i], x, y) &&
        (best == kBackground || spec.regions[i].disparity > layer_disparity(spec, best))) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::uint8_t sign_of(double v) { return v > 0.0 ? 1 : 0; }

}  // namespace

void SceneSpec::validate() const {
  if (base.empty()) throw SpecError("scene: base image is empty");
  if (d_min < 0 || d_max <= d_min) throw SpecError("scene: invalid search range");
  auto check_disparity = [&](double d, const std::string& what) {
    if (!(d >= d_min && d <= d_max)) {
      throw SpecError("scene: " + what + " disparity " + std::to_string(d) + " outside search range [" +
                      std::to_string(d_min) + ", " + std::to_string(d_max) + "]");
    }
  };
  check_disparity(background_disparity, "background");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& r = regions[i];
    const auto name = "region " + std::to_string(i);
    if (r.width <= 0 || r.height <= 0 || r.x < 0 || r.y < 0 || r.x + r.width > width() ||
        r.y + r.height > height()) {
      throw SpecError("scene: " + name + " lies outside the image");
    }
    if (r.texture && !r.texture->same_shape(base)) throw SpecError("scene: " + name + " texture size mismatch");
    check_disparity(r.disparity, name);
    for (std::size_t j = 0; j < i; ++j) {
      const auto& o = regions[j];
      const bool overlap = r.x < o.x + o.width && o.x < r.x + r.width && r.y < o.y + o.height && o.y < r.y + r.height;
      if (overlap && r.disparity != o.disparity) {
        throw SpecError("scene: regions " + std::to_string(j) + " and " + std::to_string(i) +
                        " overlap with conflicting disparities");
      }
    }
  }
  if (!(frame_rate > 0.0)) throw SpecError("scene: frame rate must be > 0");
  if (!(contrast > 0.0)) throw SpecError("scene: contrast threshold must be > 0");
}

Image<double> render_right_view(const SceneSpec& spec, double offset) {
  const int w = spec.width();
  const int h = spec.height();
  Image<double> out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double xr = x + offset;
      const int layer = visible_layer(spec, xr, y);
      out(x, y) = sample_row(layer_texture(spec, layer), xr - layer_disparity(spec, layer), y);
    }
  }
  return out;
}

StereoPair synth_stereo_pair(const SceneSpec& spec) {
  spec.validate();
  const int w = spec.width();
  const int h = spec.height();
  StereoPair pair{Image<double>(w, h), render_right_view(spec, 0.0), DisparityMap(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int layer = left_layer(spec, x, y);
      pair.left(x, y) = layer_texture(spec, layer)(x, y);
      const double d = layer_disparity(spec, layer);
      const double xr = x + d;
      if (xr < 0.0 || xr > w - 1) continue;
      if (layer_disparity(spec, visible_layer(spec, xr, y)) == d) pair.ground_truth.set(x, y, d);
    }
  }
  return pair;
}

std::vector<Event> events_from_frames(std::span<const Image<double>> frames, std::span<const double> timestamps,
                                      double contrast, double floor) {
  if (frames.size() < 2) throw ConfigError("events_from_frames: at least two frames are required");
  if (timestamps.size() != frames.size()) throw ConfigError("events_from_frames: one timestamp per frame required");
  if (!(contrast > 0.0)) throw ConfigError("events_from_frames: contrast must be > 0");
  if (!(floor > 0.0)) throw ConfigError("events_from_frames: intensity floor must be > 0");
  for (std::size_t k = 1; k < frames.size(); ++k) {
    require_same_shape(frames[0], frames[k], "events_from_frames");
    if (!(timestamps[k] > timestamps[k - 1])) {
      throw ConfigError("events_from_frames: timestamps must be strictly increasing");
    }
  }

  const int w = frames[0].width();
  const int h = frames[0].height();
  auto log_at = [floor](const Image<double>& f, int x, int y) { return std::log(std::max(f(x, y), floor)); };

  Image<double> reference(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) reference(x, y) = log_at(frames[0], x, y);
  }

  std::vector<Event> events;
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
    const double t0 = timestamps[k];
    const double dt = timestamps[k + 1] - t0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double prev = log_at(frames[k], x, y);
        const double cur = log_at(frames[k + 1], x, y);
        double& ref = reference(x, y);
        const double delta = cur - ref;
        // Tolerate rounding in the log so that exact multiples of c count.
        const auto crossings = static_cast<long>(std::floor(std::abs(delta) / contrast + 1e-9));
        if (crossings == 0) continue;
        const double step = delta > 0.0 ? contrast : -contrast;
        const int polarity = sign_of(delta) ? 1 : -1;
        for (long j = 1; j <= crossings; ++j) {
          const double level = ref + static_cast<double>(j) * step;
          const double frac = cur == prev ? 1.0 : std::clamp((level - prev) / (cur - prev), 0.0, 1.0);
          events.push_back({t0 + frac * dt, x, y, polarity});
        }
        ref += static_cast<double>(crossings) * step;
      }
    }
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
  return events;
}

DepthMap depth_from_pointcloud(const PointCloud& cloud, const Pose& camera_pose, const StereoRig& rig, int height,
                               int width) {
  rig.validate();
  DepthMap depth(width, height);
  const Pose world_to_camera = inverse(camera_pose);
  for (const auto& p : cloud) {
    const Eigen::Vector3d c = world_to_camera.apply({p.x, p.y, p.z});
    if (!(c.z() > 0.0)) continue;
    const long u = std::lround(rig.focal * c.x() / c.z() + rig.cx);
    const long v = std::lround(rig.focal * c.y() / c.z() + rig.cy);
    if (u < 0 || v < 0 || u >= width || v >= height) continue;
    const int x = static_cast<int>(u);
    const int y = static_cast<int>(v);
    if (!depth.is_valid(x, y) || c.z() < depth.at(x, y)) depth.set(x, y, c.z());
  }
  return depth;
}

SyntheticFixture make_fixture(const SceneSpec& spec) {
  spec.validate();
  SyntheticFixture fx;
  const auto pair = synth_stereo_pair(spec);
  fx.ground_truth = pair.ground_truth;

  const std::size_t n = spec.motion.size();
  double remaining = 0.0;
  for (const double m : spec.motion) remaining += m;
  for (std::size_t k = 0; k <= n; ++k) {
    fx.right_frames.push_back(remaining == 0.0 ? pair.right : render_right_view(spec, remaining));
    fx.timestamps.push_back(static_cast<double>(k) / spec.frame_rate);
    if (k < n) remaining -= spec.motion[k];
  }
  if (fx.right_frames.size() >= 2) fx.events = events_from_frames(fx.right_frames, fx.timestamps, spec.contrast);
  fx.left.pixels = pair.left;
  fx.left.timestamp = fx.timestamps.back();
  return fx;
}

void write_fixture(const std::filesystem::path& dir, const SyntheticFixture& fixture) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create fixture directory " + dir.string() + ": " + ec.message());
  write_events(dir / kFixtureEvents, fixture.events);
  write_pgm(dir / kFixtureFrame, fixture.left.pixels, 65535);
  if (!fixture.right_frames.empty()) write_pgm(dir / kFixtureRight, fixture.right_frames.back(), 65535);
  write_pfm(dir / kFixtureGroundTruth, fixture.ground_truth);
}

Image<double> disk_texture(int width, int height, std::uint64_t seed, const TextureOptions& options) {
  if (options.palette.empty()) throw SpecError("texture palette is empty");
  if (options.min_radius < 0 || options.max_radius < options.min_radius) throw SpecError("invalid disk radii");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> level(0, options.palette.size() - 1);
  std::uniform_int_distribution<int> radius(options.min_radius, options.max_radius);
  std::uniform_int_distribution<int> px(0, std::max(width - 1, 0));
  std::uniform_int_distribution<int> py(0, std::max(height - 1, 0));
  Image<double> img(width, height, options.palette[level(rng)]);
  for (int i = 0; i < options.disks; ++i) {
    const int cx = px(rng);
    const int cy = py(rng);
    const int r = radius(rng);
    const double v = options.palette[level(rng)];
    for (int y = std::max(cy - r, 0); y <= std::min(cy + r, height - 1); ++y) {
      for (int x = std::max(cx - r, 0); x <= std::min(cx + r, width - 1); ++x) {
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img(x, y) = v;
      }
    }
  }
  return img;
}

SceneSpec random_two_region_scene(std::uint64_t seed, const RandomSceneOptions& options) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int span = options.d_max - options.d_min;
  const int bg_hi = options.d_min + std::max(span / 2 - 5, 5);
  std::uniform_int_distribution<int> bg_d(options.d_min + 5, bg_hi);

  SceneSpec spec;
  spec.base = disk_texture(options.width, options.height, seed * 2 + 1, options.texture);
  spec.background_disparity = bg_d(rng);
  spec.d_min = options.d_min;
  spec.d_max = options.d_max;
  spec.contrast = options.contrast;

  std::uniform_int_distribution<int> fg_d(static_cast<int>(spec.background_disparity) + 10, options.d_max - 5);
  std::uniform_int_distribution<int> rw(options.width / 4, options.width / 2);
  std::uniform_int_distribution<int> rh(options.height / 4, options.height / 2);
  Region fg;
  fg.width = rw(rng);
  fg.height = rh(rng);
  std::uniform_int_distribution<int> rx(options.width / 8, options.width - fg.width - options.width / 8);
  std::uniform_int_distribution<int> ry(options.height / 8, options.height - fg.height - options.height / 8);
  fg.x = rx(rng);
  fg.y = ry(rng);
  fg.disparity = fg_d(rng);
  fg.texture = disk_texture(options.width, options.height, seed * 2 + 2, options.texture);
  spec.regions.push_back(std::move(fg));
  return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene spec " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("scene spec " + path.string() + ": " + e.what());
  }
  const auto dir = path.parent_path();

  try {
    TextureOptions tex;
    if (doc.contains("texture")) {
      const auto& t = doc.at("texture");
      tex.disks = t.value("disks", tex.disks);
      tex.min_radius = t.value("min_radius", tex.min_radius);
      tex.max_radius = t.value("max_radius", tex.max_radius);
      tex.palette = t.value("palette", tex.palette);
    }
    auto layer = [&](const nlohmann::json& node, int w, int h, std::uint64_t fallback_seed) -> Image<double> {
      if (node.contains("image")) {
        auto img = read_grayscale(dir / node.at("image").get<std::string>());
        return img;
      }
      return disk_texture(w, h, node.value("texture_seed", fallback_seed), tex);
    };

    SceneSpec spec;
    const int w = doc.value("width", 640);
    const int h = doc.value("height", 480);
    spec.base = layer(doc.value("background", nlohmann::json::object()), w, h, 1);
    spec.background_disparity = doc.value("background_disparity", 0.0);
    spec.d_min = doc.value("d_min", spec.d_min);
    spec.d_max = doc.value("d_max", spec.d_max);
    spec.frame_rate = doc.value("frame_rate", spec.frame_rate);
    spec.contrast = doc.value("contrast", spec.contrast);
    if (doc.contains("motion")) spec.motion = doc.at("motion").get<std::vector<double>>();

    std::uint64_t seed = 2;
    for (const auto& r : doc.value("regions", nlohmann::json::array())) {
      Region region;
      region.x = r.at("x").get<int>();
      region.y = r.at("y").get<int>();
      region.width = r.at("width").get<int>();
      region.height = r.at("height").get<int>();
      region.disparity = r.at("disparity").get<double>();
      if (r.contains("image") || r.contains("texture_seed")) {
        region.texture = layer(r, spec.base.width(), spec.base.height(), seed);
      }
      ++seed;
      spec.regions.push_back(std::move(region));
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("scene spec " + path.string() + ": " + e.what());
  }
}

}  // namespace evstereo
