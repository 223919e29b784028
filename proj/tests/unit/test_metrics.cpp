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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "evstereo/metrics.hpp"
#include "oracles.hpp"

using namespace evstereo;

namespace {

DisparityMap row_map(std::initializer_list<double> values) {
  DisparityMap m(static_cast<int>(values.size()), 1);
  int x = 0;
  for (double v : values) m.set(x++, 0, v);
  return m;
}

DisparityMap random_map(std::mt19937_64& rng, int w, int h, double lo, double hi, double p_valid) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::bernoulli_distribution on(p_valid);
  DisparityMap m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (on(rng)) m.set(x, y, u(rng));
    }
  }
  return m;
}

}  // namespace

TEST(Rmse, Examples) {
  const auto gt = row_map({2.0, 2.0});
  EXPECT_EQ(rmse(gt, gt, 0), 0.0);
  EXPECT_NEAR(rmse(row_map({2.0, 4.0}), gt, 0), std::sqrt(2.0), 1e-15);
}

TEST(Rmse, DisjointMasksAreEmpty) {
  DisparityMap a(4, 1), b(4, 1);
  a.set(0, 0, 1.0);
  b.set(1, 0, 1.0);
  EXPECT_THROW(rmse(a, b, 0), EmptyEvaluationError);
  EXPECT_THROW(bad_p(a, b, 5.0, 0.05, 0), EmptyEvaluationError);
  EXPECT_THROW(delta_ratios(a, b, 0), EmptyEvaluationError);
}

TEST(Rmse, MarginExcludesBorderColumns) {
  DisparityMap est(10, 1), gt(10, 1);
  for (int x = 0; x < 10; ++x) {
    gt.set(x, 0, 5.0);
    est.set(x, 0, x < 2 || x >= 8 ? 100.0 : 5.0);
  }
  EXPECT_EQ(rmse(est, gt, 2), 0.0);
  EXPECT_GT(rmse(est, gt, 1), 0.0);
  EXPECT_THROW(rmse(est, gt, 5), EmptyEvaluationError);
  EXPECT_THROW(rmse(est, gt, -1), ConfigError);
  const auto mask = evaluation_mask(est, gt, 2);
  for (int x = 0; x < 10; ++x) EXPECT_EQ(mask(x, 0), x >= 2 && x < 8 ? 1 : 0);
}

TEST(Rmse, ShapeMismatch) {
  EXPECT_THROW(rmse(DisparityMap(3, 2), DisparityMap(2, 3), 0), DimensionError);
}

TEST(BadP, Examples) {
  EXPECT_EQ(bad_p(row_map({192.0}), row_map({200.0}), 5.0, 0.05, 0), 0.0);
  EXPECT_EQ(bad_p(row_map({16.0}), row_map({10.0}), 5.0, 0.05, 0), 1.0);
  EXPECT_EQ(bad_p(row_map({14.0}), row_map({10.0}), 5.0, 0.05, 0), 0.0);
  const auto m = row_map({1.0, 30.0, 7.0, 90.0});
  EXPECT_EQ(bad_p(m, m, 5.0, 0.05, 0), 0.0);
}

TEST(BadP, ThresholdExtremes) {
  std::mt19937_64 rng(1);
  const auto est = random_map(rng, 32, 32, 0.0, 80.0, 0.8);
  auto gt = random_map(rng, 32, 32, 0.0, 80.0, 0.8);
  // Make a known share of errors exactly zero.
  std::size_t n = 0, nonzero = 0;
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      if (!est.is_valid(x, y) || !gt.is_valid(x, y)) continue;
      if ((x + y) % 3 == 0) gt.set(x, y, est.at(x, y));
      ++n;
      nonzero += est.at(x, y) != gt.at(x, y);
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(bad_p(est, gt, inf, inf, 0), 0.0);
  EXPECT_DOUBLE_EQ(bad_p(est, gt, 0.0, 0.0, 0), static_cast<double>(nonzero) / static_cast<double>(n));
}

TEST(Delta, WorkedExamples) {
  const auto gt = row_map({10.0});
  const auto a = delta_ratios(row_map({10.0}), gt, 0);
  const auto b = delta_ratios(row_map({13.0}), gt, 0);
  const auto c = delta_ratios(row_map({21.0}), gt, 0);
  EXPECT_EQ(a.delta, (std::array<double, 3>{1.0, 1.0, 1.0}));
  EXPECT_EQ(b.delta, (std::array<double, 3>{0.0, 1.0, 1.0}));
  EXPECT_EQ(c.delta, (std::array<double, 3>{0.0, 0.0, 0.0}));
  // Symmetric in the ratio direction.
  EXPECT_EQ(delta_ratios(row_map({10.0}), row_map({13.0}), 0).delta, b.delta);
}

TEST(Delta, NonPositiveValues) {
  const auto d = delta_ratios(row_map({5.0, 5.0, 0.0}), row_map({5.0, 0.0, 5.0}), 0);
  EXPECT_EQ(d.excluded, 1u);
  EXPECT_EQ(d.count, 2u);
  EXPECT_EQ(d.delta[2], 0.5);
  EXPECT_THROW(delta_ratios(row_map({5.0}), row_map({0.0}), 0), EmptyEvaluationError);
}

TEST(Evaluate, ZeroGroundTruthWarns) {
  const auto r = evaluate(row_map({5.0, 5.0}), row_map({5.0, 0.0}), {0, 5.0, 0.05});
  EXPECT_EQ(r.count, 2u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("excluded"), std::string::npos);
}

TEST(MetricsProperty, MatchOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto est = random_map(rng, 32, 32, -2.0, 80.0, 0.7);
    const auto gt = random_map(rng, 32, 32, 0.0, 80.0, 0.7);
    const int margin = trial % 5;
    const auto o = oracle::metrics(est, gt, margin, 5.0, 0.05);
    EXPECT_NEAR(rmse(est, gt, margin), o.rmse, 1e-12);
    EXPECT_NEAR(bad_p(est, gt, 5.0, 0.05, margin), o.bad, 1e-12);
    const auto d = delta_ratios(est, gt, margin);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(d.delta[static_cast<std::size_t>(i)], o.delta[static_cast<std::size_t>(i)], 1e-12);
    EXPECT_EQ(evaluate(est, gt, {margin, 5.0, 0.05}).count, o.count);
  }
}

TEST(MetricsProperty, InvariantUnderPixelPermutation) {
  std::mt19937_64 rng(3);
  const auto est = random_map(rng, 20, 15, 0.0, 60.0, 0.8);
  const auto gt = random_map(rng, 20, 15, 0.0, 60.0, 0.8);
  std::vector<int> order(300);
  for (int i = 0; i < 300; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  DisparityMap pe(20, 15), pg(20, 15);
  for (int i = 0; i < 300; ++i) {
    const int src = order[static_cast<std::size_t>(i)];
    const int sx = src % 20, sy = src / 20, dx = i % 20, dy = i / 20;
    if (est.is_valid(sx, sy)) pe.set(dx, dy, est.at(sx, sy));
    if (gt.is_valid(sx, sy)) pg.set(dx, dy, gt.at(sx, sy));
  }
  EXPECT_NEAR(rmse(est, gt, 0), rmse(pe, pg, 0), 1e-12);
  EXPECT_NEAR(bad_p(est, gt, 5.0, 0.05, 0), bad_p(pe, pg, 5.0, 0.05, 0), 1e-12);
  const auto a = delta_ratios(est, gt, 0), b = delta_ratios(pe, pg, 0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a.delta[i], b.delta[i], 1e-12);
}

TEST(MetricsProperty, BadPIsMonotoneInThresholds) {
  std::mt19937_64 rng(4);
  const auto est = random_map(rng, 32, 32, 0.0, 80.0, 0.7);
  const auto gt = random_map(rng, 32, 32, 0.0, 80.0, 0.7);
  double prev = 1.0;
  for (double t : {0.0, 1.0, 2.0, 5.0, 10.0, 40.0}) {
    const double b = bad_p(est, gt, t, 0.05, 0);
    EXPECT_LE(b, prev);
    prev = b;
  }
}

TEST(Report, CsvFormat) {
  MetricReport r;
  r.rmse = 1.5;
  r.bad_p = 0.125;
  r.delta = {0.5, 0.75, 1.0};
  r.count = 42;
  EXPECT_EQ(report_csv_header(), "sequence,method,count,rmse,bad_p,delta1,delta2,delta3");
  EXPECT_EQ(report_csv_row(r, "seq", "D_p"), "seq,D_p,42,1.500000,0.125000,0.500000,0.750000,1.000000");
  std::ostringstream text;
  r.warnings.push_back("note");
  write_report_text(text, r, "seq", "D_p");
  EXPECT_NE(text.str().find("bad-p   12.50 %"), std::string::npos);
  EXPECT_NE(text.str().find("warning: note"), std::string::npos);
}
