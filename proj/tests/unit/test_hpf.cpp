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

#include <cmath>
#include <random>

#include "evstereo/hpf.hpp"

using namespace evstereo;

TEST(HighPass, FreshEventGivesContrast) {
  HighPassFilter f(4, 3, {120.0, 0.1});
  f.update(Event{0.0, 1, 1, 1});
  EXPECT_EQ(f.value(1, 1), 0.1);
  EXPECT_EQ(f.last_update(1, 1), 0.0);
}

TEST(HighPass, DecayThenJumpMatchesClosedForm) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double alpha = 1.0 + 500.0 * u(rng);
    const double c = 0.01 + u(rng);
    const double t0 = u(rng);
    const double dt = 0.05 * u(rng);
    HighPassFilter f(2, 2, {alpha, c});
    f.update(Event{t0, 0, 0, -1});
    f.update(Event{t0 + dt, 0, 0, 1});
    const double expect = -c * std::exp(-alpha * dt) + c;
    EXPECT_NEAR(f.value(0, 0), expect, 1e-12 * c);
  }
}

TEST(HighPass, OppositeEventsAtSameTimeCancel) {
  HighPassFilter f(2, 2);
  f.update(Event{0.0, 0, 0, 1});
  f.update(Event{0.01, 0, 0, 1});
  const double before = f.sample(0.01)(0, 0);
  f.update(Event{0.01, 0, 0, 1});
  f.update(Event{0.01, 0, 0, -1});
  EXPECT_NEAR(f.value(0, 0), before, 1e-15);
}

TEST(HighPass, SampleAtLastUpdateIsVerbatim) {
  HighPassFilter f(3, 1);
  f.update(Event{0.001, 0, 0, 1});
  f.update(Event{0.002, 2, 0, -1});
  f.update(Event{0.004, 2, 0, -1});
  const auto img = f.sample(0.004);
  EXPECT_EQ(img(2, 0), f.value(2, 0));
  EXPECT_EQ(img(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(img(0, 0), 0.1 * std::exp(-120.0 * 0.003));
}

TEST(HighPass, NoEventsSamplesToZero) {
  HighPassFilter f(5, 4);
  const auto img = f.sample(3.0);
  for (double v : img.pixels.pixels()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(img.timestamp, 3.0);
}

TEST(HighPass, DecayOracle) {
  HighPassFilter f(1, 1, {120.0, 0.1});
  f.update(Event{0.0, 0, 0, 1});
  for (double t : {0.001, 0.01, 0.1}) EXPECT_NEAR(f.sample(t)(0, 0), 0.1 * std::exp(-120.0 * t), 1e-16);
}

TEST(HighPass, OrderingErrors) {
  HighPassFilter f(2, 2);
  f.update(Event{1.0, 0, 0, 1});
  EXPECT_THROW(f.update(Event{0.5, 0, 0, 1}), OrderingError);
  EXPECT_NO_THROW(f.update(Event{0.5, 1, 1, 1}));  // other pixel
  EXPECT_THROW(f.sample(0.9), OrderingError);
  EXPECT_THROW(f.update(Event{2.0, 2, 0, 1}), RecordError);
}

TEST(HighPass, InvalidParams) {
  EXPECT_THROW(HighPassFilter(2, 2, {0.0, 0.1}), ConfigError);
  EXPECT_THROW(HighPassFilter(2, 2, {120.0, 0.0}), ConfigError);
}

namespace {

std::vector<Event> random_stream(std::mt19937_64& rng, int n, int w, int h) {
  std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1);
  std::exponential_distribution<double> gap(2000.0);
  std::bernoulli_distribution on(0.5);
  std::vector<Event> ev;
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    t += gap(rng);
    ev.push_back({t, px(rng), py(rng), on(rng) ? 1 : -1});
  }
  return ev;
}

}  // namespace

TEST(HighPassProperty, Deterministic) {
  std::mt19937_64 rng(3);
  const auto ev = random_stream(rng, 3000, 16, 12);
  const auto a = reconstruct(ev, {16, 12}, ev.back().t + 0.001);
  const auto b = reconstruct(ev, {16, 12}, ev.back().t + 0.001);
  EXPECT_EQ(a.pixels, b.pixels);
}

TEST(HighPassProperty, SuperpositionPerPixel) {
  std::mt19937_64 rng(4);
  const HighPassParams p{120.0, 0.1};
  for (int trial = 0; trial < 50; ++trial) {
    const auto ev = random_stream(rng, 40, 1, 1);
    const double t = ev.back().t + 0.002;
    // Direct sum of each event's decayed contribution.
    double expect = 0.0;
    for (const auto& e : ev) expect += e.polarity * p.contrast * std::exp(-p.cutoff * (t - e.t));
    EXPECT_NEAR(reconstruct(ev, {1, 1}, t, p)(0, 0), expect, 1e-12);
    // Splitting the stream and superposing the two reconstructions.
    const std::size_t half = ev.size() / 2;
    const auto a = reconstruct(std::span(ev).first(half), {1, 1}, t, p)(0, 0);
    const auto b = reconstruct(std::span(ev).subspan(half), {1, 1}, t, p)(0, 0);
    EXPECT_NEAR(a + b, expect, 1e-12);
  }
}

TEST(HighPassProperty, DecaysToZero) {
  std::mt19937_64 rng(5);
  const auto ev = random_stream(rng, 500, 8, 8);
  HighPassFilter f(8, 8);
  f.update(ev);
  const double t0 = ev.back().t;
  const auto start = f.sample(t0);
  const auto later = f.sample(t0 + 10.0 / f.params().cutoff);
  for (std::size_t i = 0; i < start.pixels.size(); ++i) {
    EXPECT_LE(std::abs(later.pixels.pixels()[i]), 5e-5 * std::abs(start.pixels.pixels()[i]));
  }
}

TEST(HighPassProperty, PixelIndependence) {
  std::mt19937_64 rng(6);
  const auto ev = random_stream(rng, 400, 6, 6);
  HighPassFilter f(6, 6);
  f.update(ev);
  const double t = ev.back().t;
  const auto before = f.sample(t);
  f.update(Event{t, 2, 3, 1});
  const auto after = f.sample(t);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) {
      if (x == 2 && y == 3) continue;
      EXPECT_EQ(before(x, y), after(x, y));
    }
  }
}
