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

#include <vector>

#include "evstereo/image.hpp"

namespace evstereo {

/// How the upsampled coarse estimate and the level-local estimate are weighted
/// where both exist. Weights are always in {0, 0.5, 1} and sum to 1.
enum class FusionPolicy {
  average,       // 0.5 / 0.5
  prefer_local,  // 0 / 1
};

struct MatcherConfig {
  int window_radius = 7;  // window is (2r+1)^2
  int d_min = 0;
  int d_max = 80;
  double lambda = -1.0;   // cost weight; the argmin of lambda * overlap is taken
  int min_overlap = 3;    // co-active pixels required for a valid match
  int levels = 5;
  double scale = 0.9;
  FusionPolicy fusion = FusionPolicy::average;
  int support_radius = 5;
  double support_tolerance = 3.0;
  int support_count = 4;
  /// Search E_b at x - dx instead of x + dx (right-camera reference rigs).
  bool mirror = false;

  /// Throws ConfigError on any violated field constraint.
  void validate() const;
};

/// Raw overlap between the window of `left` centered at (x, y) and the window
/// of `right` shifted by `dx` (or -dx when mirrored). Pixels falling outside
/// either map contribute zero.
int match_cost(const BinaryEdgeMap& left, const BinaryEdgeMap& right, int x, int y, int dx,
               const MatcherConfig& cfg);

/// Per-pixel best overlap found by the last sparse search, kept alongside D_s.
struct SparseResult {
  DisparityMap disparity;
  Image<int> best_overlap;
};

/// Winner-take-all search at every edge pixel of `left` over [d_min, d_max].
/// Minimizes lambda * overlap; ties go to the smallest shift. Pixels whose best
/// overlap is below `min_overlap`, and all non-edge pixels, are invalid.
SparseResult sparse_search(const BinaryEdgeMap& left, const BinaryEdgeMap& right, const MatcherConfig& cfg);
DisparityMap sparse_disparity(const BinaryEdgeMap& left, const BinaryEdgeMap& right, const MatcherConfig& cfg);

/// round(scale^level * extent)
int pyramid_extent(int extent, double scale, int level);

/// Level 0 is the input. A coarse pixel is set when any fine pixel whose center
/// falls inside it is set. Throws ConfigError when the coarsest level would be
/// smaller than twice the match window (2 * (2r + 1)).
std::vector<BinaryEdgeMap> build_pyramid(const BinaryEdgeMap& map, int levels, double scale,
                                         int window_radius = 0);

struct FusionWeights {
  double coarse = 0.0;  // I_1
  double local = 0.0;   // I_2
};

/// Weight pair for one pixel given which sources are valid. Returns {0, 0}
/// when neither is.
FusionWeights fusion_weights(bool coarse_valid, bool local_valid, FusionPolicy policy);

/// Coarse-to-fine refinement. The coarsest level is a plain sparse search;
/// each finer level fuses the nearest-neighbor upsampled coarse estimate
/// (rescaled by the level width ratio) with its own sparse search. Fused
/// values are snapped to the integer pixel grid of their level. Output pixels
/// are the edge pixels of `left` where either source is valid.
DisparityMap pyramid_disparity(const BinaryEdgeMap& left, const BinaryEdgeMap& right, const MatcherConfig& cfg);

/// Keeps a valid pixel only if at least `support_count` other valid pixels
/// within `support_radius` (Euclidean) differ by at most `support_tolerance`.
/// Removal is repeated until nothing changes, so the result is idempotent.
/// Surviving values are untouched.
DisparityMap prune_outliers(const DisparityMap& disparity, const MatcherConfig& cfg);

}  // namespace evstereo
