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

#include "evstereo/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace evstereo {
namespace {

// Search range expressed in pixels of a pyramid level whose width ratio to the
// input is `ratio`.
MatcherConfig level_config(const MatcherConfig& cfg, double ratio, int level_width) {
  MatcherConfig out = cfg;
  out.d_min = static_cast<int>(std::floor(cfg.d_min * ratio));
  out.d_max = std::min(static_cast<int>(std::ceil(cfg.d_max * ratio)), level_width - 1);
  if (out.d_max <= out.d_min) out.d_max = out.d_min + 1;
  return out;
}

// Summed-area table with a zero border row and column.
class Integral {
public:
  Integral(int width, int height)
      : width_(width), stride_(static_cast<std::size_t>(width) + 1),
        sums_(stride_ * (static_cast<std::size_t>(height) + 1), 0) {}

  template <typename Fn>
  void build(int height, Fn&& value) {
    for (int y = 0; y < height; ++y) {
      std::int32_t run = 0;
      const std::size_t above = static_cast<std::size_t>(y) * stride_;
      const std::size_t here = above + stride_;
      for (int x = 0; x < width_; ++x) {
        run += value(x, y);
        sums_[here + static_cast<std::size_t>(x) + 1] = sums_[above + static_cast<std::size_t>(x) + 1] + run;
      }
    }
  }

  // Inclusive rectangle, already clipped to the image.
  std::int32_t box(int x0, int y0, int x1, int y1) const {
    const auto a = static_cast<std::size_t>(y0) * stride_;
    const auto b = static_cast<std::size_t>(y1 + 1) * stride_;
    const auto l = static_cast<std::size_t>(x0);
    const auto r = static_cast<std::size_t>(x1 + 1);
    return sums_[b + r] - sums_[a + r] - sums_[b + l] + sums_[a + l];
  }

private:
  int width_;
  std::size_t stride_;
  std::vector<std::int32_t> sums_;
};

}  // namespace

void MatcherConfig::validate() const {
  if (window_radius < 0) throw ConfigError("window_radius must be >= 0");
  if (d_min < 0) throw ConfigError("d_min must be >= 0");
  if (d_max <= d_min) throw ConfigError("d_max must exceed d_min");
  if (!(lambda < 0.0)) throw ConfigError("lambda must be negative");
  if (min_overlap < 0) throw ConfigError("min_overlap must be >= 0");
  if (levels < 1) throw ConfigError("levels must be >= 1");
  if (!(scale > 0.0 && scale < 1.0)) throw ConfigError("scale must be in (0, 1)");
  if (support_radius < 0) throw ConfigError("support_radius must be >= 0");
  if (!(support_tolerance >= 0.0)) throw ConfigError("support_tolerance must be >= 0");
  if (support_count < 0) throw ConfigError("support_count must be >= 0");
}

int match_cost(const BinaryEdgeMap& left, const BinaryEdgeMap& right, int x, int y, int dx,
               const MatcherConfig& cfg) {
  require_same_shape(left, right, "match_cost");
  const int r = cfg.window_radius;
  const int shift = cfg.mirror ? -dx : dx;
  int overlap = 0;
  for (int j = -r; j <= r; ++j) {
    const int yy = y + j;
    if (yy < 0 || yy >= left.height()) continue;
    for (int i = -r; i <= r; ++i) {
      const int xl = x + i;
      const int xr = xl + shift;
      if (xl < 0 || xl >= left.width() || xr < 0 || xr >= right.width()) continue;
      overlap += left(xl, yy) & right(xr, yy);
    }
  }
  return overlap;
}

SparseResult sparse_search(const BinaryEdgeMap& left, const BinaryEdgeMap& right, const MatcherConfig& cfg) {
  cfg.validate();
  require_same_shape(left, right, "sparse_disparity");
  const int w = left.width();
  const int h = left.height();
  if (cfg.d_max >= w && w > 0) {
    throw ConfigError("search range [" + std::to_string(cfg.d_min) + ", " + std::to_string(cfg.d_max) +
                      "] exceeds image width " + std::to_string(w));
  }

  SparseResult out{DisparityMap(w, h), Image<int>(w, h, 0)};
  std::vector<std::pair<int, int>> anchors;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (left(x, y)) anchors.emplace_back(x, y);
    }
  }
  if (anchors.empty()) return out;

  std::vector<double> best_cost(anchors.size(), std::numeric_limits<double>::infinity());
  std::vector<int> best_shift(anchors.size(), cfg.d_min);
  std::vector<int> best_overlap(anchors.size(), 0);

  const int r = cfg.window_radius;
  Integral sums(w, h);
  for (int d = cfg.d_min; d <= cfg.d_max; ++d) {
    const int shift = cfg.mirror ? -d : d;
    sums.build(h, [&](int x, int y) -> std::int32_t {
      const int xr = x + shift;
      return (xr >= 0 && xr < w) ? (left(x, y) & right(xr, y)) : 0;
    });
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      const auto [x, y] = anchors[a];
      const int overlap = sums.box(std::max(x - r, 0), std::max(y - r, 0), std::min(x + r, w - 1),
                                   std::min(y + r, h - 1));
      const double cost = cfg.lambda * overlap;
      if (cost < best_cost[a]) {
        best_cost[a] = cost;
        best_shift[a] = d;
        best_overlap[a] = overlap;
      }
    }
  }

  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const auto [x, y] = anchors[a];
    out.best_overlap(x, y) = best_overlap[a];
    if (best_overlap[a] >= cfg.min_overlap && best_overlap[a] > 0) {
      out.disparity.set(x, y, static_cast<double>(best_shift[a]));
    }
  }
  return out;
}

DisparityMap sparse_disparity(const BinaryEdgeMap& left, const BinaryEdgeMap& right, const MatcherConfig& cfg) {
  return sparse_search(left, right, cfg).disparity;
}

int pyramid_extent(int extent, double scale, int level) {
  return static_cast<int>(std::lround(std::pow(scale, level) * extent));
}

std::vector<BinaryEdgeMap> build_pyramid(const BinaryEdgeMap& map, int levels, double scale, int window_radius) {
  if (levels < 1) throw ConfigError("pyramid needs at least one level");
  if (!(scale > 0.0 && scale < 1.0)) throw ConfigError("pyramid scale must be in (0, 1)");
  const int w = map.width();
  const int h = map.height();
  const int min_extent = std::max(2 * (2 * window_radius + 1), 1);
  const int coarse_w = pyramid_extent(w, scale, levels - 1);
  const int coarse_h = pyramid_extent(h, scale, levels - 1);
  if (coarse_w < min_extent || coarse_h < min_extent) {
    throw ConfigError("pyramid: coarsest level " + std::to_string(coarse_w) + "x" + std::to_string(coarse_h) +
                      " is smaller than " + std::to_string(min_extent) + " (twice the match window)");
  }

  std::vector<BinaryEdgeMap> pyramid;
  pyramid.reserve(static_cast<std::size_t>(levels));
  pyramid.push_back(map);
  for (int k = 1; k < levels; ++k) {
    const int lw = pyramid_extent(w, scale, k);
    const int lh = pyramid_extent(h, scale, k);
    BinaryEdgeMap level(lw, lh, map.modality, map.timestamp);
    const double rx = static_cast<double>(lw) / w;
    const double ry = static_cast<double>(lh) / h;
    for (int y = 0; y < h; ++y) {
      const int v = std::min(static_cast<int>((y + 0.5) * ry), lh - 1);
      for (int x = 0; x < w; ++x) {
        if (!map(x, y)) continue;
        const int u = std::min(static_cast<int>((x + 0.5) * rx), lw - 1);
        level(u, v) = 1;
      }
    }
    pyramid.push_back(std::move(level));
  }
  return pyramid;
}

FusionWeights fusion_weights(bool coarse_valid, bool local_valid, FusionPolicy policy) {
  if (coarse_valid && local_valid) {
    return policy == FusionPolicy::average ? FusionWeights{0.5, 0.5} : FusionWeights{0.0, 1.0};
  }
  if (coarse_valid) return {1.0, 0.0};
  if (local_valid) return {0.0, 1.0};
  return {0.0, 0.0};
}

DisparityMap pyramid_disparity(const BinaryEdgeMap& left, const BinaryEdgeMap& right, const MatcherConfig& cfg) {
  cfg.validate();
  require_same_shape(left, right, "pyramid_disparity");
  if (cfg.levels == 1) return sparse_disparity(left, right, cfg);

  const auto lp = build_pyramid(left, cfg.levels, cfg.scale, cfg.window_radius);
  const auto rp = build_pyramid(right, cfg.levels, cfg.scale, cfg.window_radius);
  const double base_w = left.width();

  auto config_at = [&](std::size_t k) { return level_config(cfg, lp[k].width() / base_w, lp[k].width()); };

  std::size_t k = lp.size() - 1;
  DisparityMap coarse = sparse_disparity(lp[k], rp[k], config_at(k));
  while (k-- > 0) {
    const auto& lmap = lp[k];
    const auto level_cfg = config_at(k);
    const DisparityMap local = sparse_disparity(lmap, rp[k], level_cfg);
    const int w = lmap.width();
    const int h = lmap.height();
    const int cw = coarse.width();
    const int ch = coarse.height();
    const double rx = static_cast<double>(cw) / w;
    const double ry = static_cast<double>(ch) / h;
    const double rescale = static_cast<double>(w) / cw;

    DisparityMap fused(w, h);
    for (int y = 0; y < h; ++y) {
      const int v = std::min(static_cast<int>((y + 0.5) * ry), ch - 1);
      for (int x = 0; x < w; ++x) {
        if (!lmap(x, y)) continue;
        const int u = std::min(static_cast<int>((x + 0.5) * rx), cw - 1);
        const bool coarse_valid = coarse.is_valid(u, v);
        const bool local_valid = local.is_valid(x, y);
        const auto wts = fusion_weights(coarse_valid, local_valid, cfg.fusion);
        if (wts.coarse + wts.local == 0.0) continue;
        if (wts.coarse + wts.local != 1.0) throw std::logic_error("fusion weights must sum to one");
        const double up = coarse_valid ? coarse.at(u, v) * rescale : 0.0;
        const double here = local_valid ? local.at(x, y) : 0.0;
        const double value = std::round(wts.coarse * up + wts.local * here);
        fused.set(x, y, std::clamp(value, static_cast<double>(level_cfg.d_min), static_cast<double>(level_cfg.d_max)));
      }
    }
    coarse = std::move(fused);
  }
  return coarse;
}

DisparityMap prune_outliers(const DisparityMap& disparity, const MatcherConfig& cfg) {
  const int w = disparity.width();
  const int h = disparity.height();
  const int r = cfg.support_radius;
  std::vector<std::pair<int, int>> disc;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if ((dx != 0 || dy != 0) && dx * dx + dy * dy <= r * r) disc.emplace_back(dx, dy);
    }
  }

  DisparityMap out = disparity;
  std::vector<std::pair<int, int>> alive;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (out.is_valid(x, y)) alive.emplace_back(x, y);
    }
  }

  // Peel unsupported pixels until a fixed point; the survivors are the largest
  // set in which every member has enough support.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<int, int>> next;
    next.reserve(alive.size());
    for (const auto& [x, y] : alive) {
      const double d = out.at(x, y);
      int support = 0;
      for (const auto& [dx, dy] : disc) {
        const int qx = x + dx;
        const int qy = y + dy;
        if (qx < 0 || qy < 0 || qx >= w || qy >= h || !out.is_valid(qx, qy)) continue;
        if (std::abs(out.at(qx, qy) - d) <= cfg.support_tolerance && ++support >= cfg.support_count) break;
      }
      if (support >= cfg.support_count) {
        next.emplace_back(x, y);
      } else {
        out.invalidate(x, y);
        changed = true;
      }
    }
    alive = std::move(next);
  }
  return out;
}

}  // namespace evstereo
