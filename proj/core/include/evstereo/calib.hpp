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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "evstereo/errors.hpp"

namespace evstereo {

/// Rigid transform in SE(3): p' = rotation * p + translation (meters).
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return {}; }
  static Pose from_quaternion(double qw, double qx, double qy, double qz, const Eigen::Vector3d& t);

  /// R^T R = I and det R = +1, both to `tol`.
  bool is_valid(double tol = 1e-10) const;

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
  Eigen::Matrix4d matrix() const;
};

Pose compose(const Pose& a, const Pose& b);  // a * b
Pose inverse(const Pose& p);

/// Axis-angle vector of a rotation. At exactly pi the axis sign is ambiguous;
/// the returned axis has a non-negative largest component.
Eigen::Vector3d log_rot(const Eigen::Matrix3d& rotation);
Eigen::Matrix3d exp_rot(const Eigen::Vector3d& omega);

/// Geodesic distance between two rotations, radians.
double rotation_distance(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

/// One relative motion: `hand` from forward kinematics (A), `camera` from
/// pattern observations (B). Satisfies A X = X B for the hand-eye transform X.
struct MotionPair {
  Pose hand;
  Pose camera;
  std::size_t from = 0;
  std::size_t to = 0;
  /// False when the hand did not rotate; such pairs carry no rotation information.
  bool informative = true;
};

enum class Pairing { consecutive, all };

/// A_ij = H_j^-1 H_i and B_ij = C_j C_i^-1, with H the end-effector pose in
/// the robot base and C the pattern pose in the camera.
///
/// Throws ConfigError for unequal lengths or fewer than 3 poses and
/// DegenerateConfigurationError without two independent rotation axes.
std::vector<MotionPair> make_motion_pairs(const std::vector<Pose>& hand_poses, const std::vector<Pose>& cam_poses,
                                          Pairing pairing = Pairing::consecutive);

struct PairResidual {
  double rotation = 0.0;       // rad
  double translation = 0.0;    // m
  double angle_mismatch = 0.0; // | |A| - |B| | in rad
};

struct HandEyeResult {
  Pose transform;  // camera pose in the end-effector frame
  std::vector<PairResidual> residuals;
  std::vector<std::string> warnings;

  double rms_rotation() const;
  double rms_translation() const;
};

struct HandEyeOptions {
  double angle_tolerance = 0.02;  // rad, rotation-angle consistency warning
};

/// Separable solve: rotation from the axis-angle correspondences
/// log(R_A) = R_X log(R_B) by orthogonal Procrustes, then translation from the
/// stacked system (R_A - I) t_X = R_X t_B - t_A by least squares.
HandEyeResult solve_hand_eye(const std::vector<MotionPair>& pairs, const HandEyeOptions& options = {});

/// Residuals of an arbitrary candidate X against the pairs.
std::vector<PairResidual> hand_eye_residuals(const std::vector<MotionPair>& pairs, const Pose& x);

/// Sum of squared axis-angle mismatches ||log R_A - R_X log R_B||^2, the
/// quantity the rotation stage minimizes.
double rotation_objective(const std::vector<MotionPair>& pairs, const Eigen::Matrix3d& rotation);

struct StampedPose {
  double t = 0.0;
  Pose pose;
};

/// CSV `t, x, y, z, qw, qx, qy, qz`. Quaternions are normalized on read. Lines
/// starting with '#' and a leading non-numeric header are skipped.
std::vector<StampedPose> read_pose_log(std::istream& in);
std::vector<StampedPose> read_pose_log(const std::filesystem::path& path);
void write_pose_log(std::ostream& out, const std::vector<StampedPose>& poses);

/// Plain-text report: the transform as a 4x4 matrix and quaternion, then one
/// residual line per pair and any warnings.
void write_hand_eye_report(std::ostream& out, const HandEyeResult& result);

}  // namespace evstereo
