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

#include <numbers>
#include <random>
#include <sstream>

#include "evstereo/calib.hpp"

using namespace evstereo;

namespace {

Eigen::Vector3d random_vector(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

Pose random_pose(std::mt19937_64& rng, double angle = 1.5, double dist = 1.0) {
  return {exp_rot(random_vector(rng, angle)), random_vector(rng, dist)};
}

struct Rig {
  Pose x;
  std::vector<Pose> hand, camera;
};

// Camera observations consistent with X: C_i = X^-1 H_i^-1 T for a fixed target pose T.
Rig make_rig(std::mt19937_64& rng, int n) {
  Rig r;
  r.x = random_pose(rng);
  const Pose target = random_pose(rng, 3.0, 2.0);
  for (int i = 0; i < n; ++i) {
    r.hand.push_back(random_pose(rng));
    r.camera.push_back(compose(compose(inverse(r.x), inverse(r.hand.back())), target));
  }
  return r;
}

double pose_error(const Pose& a, const Pose& b) {
  return std::max(rotation_distance(a.rotation, b.rotation), (a.translation - b.translation).norm());
}

}  // namespace

TEST(Pose, GroupLaws) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_pose(rng), b = random_pose(rng), c = random_pose(rng);
    EXPECT_LT(pose_error(compose(compose(a, b), c), compose(a, compose(b, c))), 1e-12);
    EXPECT_LT(pose_error(compose(a, inverse(a)), Pose::identity()), 1e-12);
    EXPECT_LT(pose_error(compose(Pose::identity(), a), a), 1e-15);
    EXPECT_TRUE(compose(a, b).is_valid());
    const Eigen::Vector3d p = random_vector(rng, 3.0);
    EXPECT_LT((compose(a, b).apply(p) - a.apply(b.apply(p))).norm(), 1e-12);
    EXPECT_LT((a.matrix() * b.matrix() - compose(a, b).matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Pose, QuaternionIsNormalized) {
  const auto p = Pose::from_quaternion(2.0, 0.0, 0.0, 2.0, {1.0, 2.0, 3.0});
  EXPECT_TRUE(p.is_valid());
  EXPECT_NEAR(log_rot(p.rotation).z(), std::numbers::pi / 2.0, 1e-12);
  EXPECT_THROW(Pose::from_quaternion(0.0, 0.0, 0.0, 0.0, {}), DomainError);
}

TEST(Rotation, LogExpRoundTrip) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    Eigen::Vector3d w = random_vector(rng, 1.0);
    w *= std::uniform_real_distribution<double>(0.0, 3.1)(rng) / w.norm();
    EXPECT_LT((log_rot(exp_rot(w)) - w).norm(), 1e-10);
  }
  EXPECT_EQ(log_rot(Eigen::Matrix3d::Identity()).norm(), 0.0);
  const Eigen::Vector3d tiny(1e-14, -2e-14, 0.0);
  EXPECT_LT((log_rot(exp_rot(tiny)) - tiny).norm(), 1e-20);
}

TEST(Rotation, LogAtPiPicksCanonicalAxis) {
  const Eigen::Vector3d w(0.0, -std::numbers::pi, 0.0);
  const auto v = log_rot(exp_rot(w));
  EXPECT_NEAR(v.norm(), std::numbers::pi, 1e-9);
  EXPECT_GT(v.y(), 0.0);
  EXPECT_LT(rotation_distance(exp_rot(v), exp_rot(w)), 1e-9);
}

TEST(HandEye, MotionPairsSatisfyAxEqualsXb) {
  std::mt19937_64 rng(3);
  const auto r = make_rig(rng, 6);
  for (auto pairing : {Pairing::consecutive, Pairing::all}) {
    const auto pairs = make_motion_pairs(r.hand, r.camera, pairing);
    EXPECT_EQ(pairs.size(), pairing == Pairing::consecutive ? 5u : 15u);
    for (const auto& p : pairs) {
      EXPECT_LT(pose_error(compose(p.hand, r.x), compose(r.x, p.camera)), 1e-12);
      EXPECT_TRUE(p.informative);
    }
  }
}

TEST(HandEye, NoiselessRecovery) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = make_rig(rng, 3 + trial % 6);
    const auto result = solve_hand_eye(make_motion_pairs(r.hand, r.camera));
    EXPECT_LT(rotation_distance(result.transform.rotation, r.x.rotation), 1e-8);
    EXPECT_LT((result.transform.translation - r.x.translation).norm(), 1e-8);
    EXPECT_LT(result.rms_rotation(), 1e-8);
    EXPECT_LT(result.rms_translation(), 1e-8);
    EXPECT_TRUE(result.warnings.empty());
  }
}

TEST(HandEye, IdentityTransform) {
  std::mt19937_64 rng(5);
  std::vector<Pose> hand, cam;
  const Pose target = random_pose(rng);
  for (int i = 0; i < 5; ++i) {
    hand.push_back(random_pose(rng));
    cam.push_back(compose(inverse(hand.back()), target));
  }
  const auto result = solve_hand_eye(make_motion_pairs(hand, cam));
  EXPECT_LT(pose_error(result.transform, Pose::identity()), 1e-9);
}

TEST(HandEye, SingleAxisIsDegenerate) {
  std::vector<Pose> hand, cam;
  for (int i = 0; i < 5; ++i) {
    hand.push_back({exp_rot(Eigen::Vector3d(0.0, 0.0, 0.3 * i)), Eigen::Vector3d(0.1 * i, 0.0, 0.0)});
    cam.push_back(inverse(hand.back()));
  }
  EXPECT_THROW(make_motion_pairs(hand, cam), DegenerateConfigurationError);
}

TEST(HandEye, LengthAndCountChecks) {
  std::mt19937_64 rng(6);
  const auto r = make_rig(rng, 4);
  auto short_cam = r.camera;
  short_cam.pop_back();
  EXPECT_THROW(make_motion_pairs(r.hand, short_cam), ConfigError);
  EXPECT_THROW(make_motion_pairs({r.hand[0], r.hand[1]}, {r.camera[0], r.camera[1]}), ConfigError);
}

TEST(HandEye, StillHandPairIsIgnoredWithWarning) {
  std::mt19937_64 rng(7);
  auto r = make_rig(rng, 5);
  // Repeat pose 2 so the pair 2 -> 3 has no rotation.
  r.hand.insert(r.hand.begin() + 3, r.hand[2]);
  r.camera.insert(r.camera.begin() + 3, r.camera[2]);
  const auto pairs = make_motion_pairs(r.hand, r.camera);
  EXPECT_FALSE(pairs[2].informative);
  const auto result = solve_hand_eye(pairs);
  EXPECT_LT(pose_error(result.transform, r.x), 1e-8);
  EXPECT_EQ(result.warnings.size(), 1u);
}

TEST(HandEye, InconsistentAnglesWarn) {
  std::mt19937_64 rng(8);
  const auto r = make_rig(rng, 5);
  auto pairs = make_motion_pairs(r.hand, r.camera);
  pairs[1].camera.rotation = exp_rot(log_rot(pairs[1].camera.rotation) * 1.2);
  const auto result = solve_hand_eye(pairs);
  ASSERT_FALSE(result.warnings.empty());
  EXPECT_NE(result.warnings.front().find("pair 1->2"), std::string::npos);
}

TEST(HandEyeProperty, EquivariantUnderHandFrameChange) {
  // Re-expressing the end effector in a rotated frame G maps X to G X.
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = make_rig(rng, 6);
    const Pose g = random_pose(rng);
    std::vector<Pose> hand2;
    for (const auto& h : r.hand) hand2.push_back(compose(h, inverse(g)));
    const auto x1 = solve_hand_eye(make_motion_pairs(r.hand, r.camera)).transform;
    const auto x2 = solve_hand_eye(make_motion_pairs(hand2, r.camera)).transform;
    EXPECT_LT(pose_error(x2, compose(g, x1)), 1e-8);
  }
}

TEST(HandEyeProperty, PairingChoiceAgreesWithoutNoise) {
  std::mt19937_64 rng(10);
  const auto r = make_rig(rng, 7);
  const auto a = solve_hand_eye(make_motion_pairs(r.hand, r.camera, Pairing::consecutive)).transform;
  const auto b = solve_hand_eye(make_motion_pairs(r.hand, r.camera, Pairing::all)).transform;
  EXPECT_LT(pose_error(a, b), 1e-8);
}

TEST(HandEyeProperty, RotationIsObjectiveMinimizer) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.01);
  auto r = make_rig(rng, 8);
  for (auto& c : r.camera) {
    c.rotation = exp_rot(Eigen::Vector3d(noise(rng), noise(rng), noise(rng))) * c.rotation;
  }
  const auto pairs = make_motion_pairs(r.hand, r.camera);
  const auto rx = solve_hand_eye(pairs).transform.rotation;
  const double best = rotation_objective(pairs, rx);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Matrix3d perturbed = exp_rot(random_vector(rng, 0.01)) * rx;
    EXPECT_LE(best, rotation_objective(pairs, perturbed) + 1e-15);
  }
}

TEST(HandEyeProperty, InvariantUnderCameraConjugation) {
  // Swapping the roles of hand and camera solves for X^-1.
  std::mt19937_64 rng(12);
  const auto r = make_rig(rng, 6);
  auto pairs = make_motion_pairs(r.hand, r.camera);
  for (auto& p : pairs) std::swap(p.hand, p.camera);
  EXPECT_LT(pose_error(solve_hand_eye(pairs).transform, inverse(r.x)), 1e-8);
}

TEST(PoseLog, RoundTrip) {
  std::mt19937_64 rng(13);
  std::vector<StampedPose> poses;
  for (int i = 0; i < 5; ++i) poses.push_back({0.1 * i, random_pose(rng)});
  std::stringstream s;
  write_pose_log(s, poses);
  const auto back = read_pose_log(s);
  ASSERT_EQ(back.size(), poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    EXPECT_EQ(back[i].t, poses[i].t);
    EXPECT_LT(pose_error(back[i].pose, poses[i].pose), 1e-14);
  }
}

TEST(PoseLog, HeaderAndErrors) {
  std::stringstream ok("t,x,y,z,qw,qx,qy,qz\n0,1,2,3,1,0,0,0\n\n# note\n1,0,0,0,0,1,0,0\n");
  EXPECT_EQ(read_pose_log(ok).size(), 2u);
  std::stringstream bad("0,1,2,3,1,0,0,0\n1,0,0,zz,1,0,0,0\n");
  try {
    read_pose_log(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.offset(), 16u);
  }
  std::stringstream short_row("0,1,2,3,1,0,0\n");
  EXPECT_THROW(read_pose_log(short_row), ParseError);
}

TEST(HandEye, ReportListsResiduals) {
  std::mt19937_64 rng(14);
  const auto r = make_rig(rng, 4);
  std::ostringstream out;
  write_hand_eye_report(out, solve_hand_eye(make_motion_pairs(r.hand, r.camera)));
  EXPECT_NE(out.str().find("transform:"), std::string::npos);
  EXPECT_NE(out.str().find("pairs: 3"), std::string::npos);
}
