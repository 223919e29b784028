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

#include "evstereo/calib.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "evstereo/errors.hpp"

namespace evstereo {
namespace {

constexpr double kStillAngle = 1e-6;       // below this a hand motion carries no rotation
constexpr double kMinAxisSpread = 1e-2;    // tan(half angle) between rotation axes

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

// Ratio of the second to the first singular value of the stacked unit axes.
double axis_spread(const std::vector<Eigen::Vector3d>& axes) {
  if (axes.size() < 2) return 0.0;
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(axes.size()), 3);
  for (std::size_t i = 0; i < axes.size(); ++i) stacked.row(static_cast<Eigen::Index>(i)) = axes[i].transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const auto s = svd.singularValues();
  return s(0) > 0.0 ? s(1) / s(0) : 0.0;
}

std::vector<Eigen::Vector3d> hand_axes(const std::vector<MotionPair>& pairs) {
  std::vector<Eigen::Vector3d> axes;
  for (const auto& p : pairs) {
    const Eigen::Vector3d w = log_rot(p.hand.rotation);
    if (w.norm() > kStillAngle) axes.push_back(w.normalized());
  }
  return axes;
}

void require_independent_axes(const std::vector<MotionPair>& pairs) {
  if (axis_spread(hand_axes(pairs)) < kMinAxisSpread) {
    throw DegenerateConfigurationError(
        "hand-eye: relative motions need rotations about at least two non-parallel axes");
  }
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

}  // namespace

Pose Pose::from_quaternion(double qw, double qx, double qy, double qz, const Eigen::Vector3d& t) {
  Eigen::Quaterniond q(qw, qx, qy, qz);
  if (!(q.norm() > 0.0)) throw DomainError("zero quaternion");
  q.normalize();
  return {q.toRotationMatrix(), t};
}

bool Pose::is_valid(double tol) const {
  const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(rotation.determinant() - 1.0) <= tol && translation.allFinite();
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Pose compose(const Pose& a, const Pose& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Pose inverse(const Pose& p) {
  const Eigen::Matrix3d rt = p.rotation.transpose();
  return {rt, -(rt * p.translation)};
}

Eigen::Vector3d log_rot(const Eigen::Matrix3d& rotation) {
  const Eigen::AngleAxisd aa{Eigen::Quaterniond(rotation)};
  Eigen::Vector3d w = aa.angle() * aa.axis();
  if (std::numbers::pi - aa.angle() < 1e-12) {
    Eigen::Index i = 0;
    w.cwiseAbs().maxCoeff(&i);
    if (w(i) < 0.0) w = -w;
  }
  return w;
}

Eigen::Matrix3d exp_rot(const Eigen::Vector3d& omega) {
  const double angle = omega.norm();
  if (angle < 1e-12) return Eigen::Matrix3d::Identity() + skew(omega);
  return Eigen::AngleAxisd(angle, omega / angle).toRotationMatrix();
}

double rotation_distance(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return log_rot(a.transpose() * b).norm();
}

std::vector<MotionPair> make_motion_pairs(const std::vector<Pose>& hand_poses, const std::vector<Pose>& cam_poses,
                                          Pairing pairing) {
  if (hand_poses.size() != cam_poses.size()) {
    throw ConfigError("hand-eye: " + std::to_string(hand_poses.size()) + " hand poses but " +
                      std::to_string(cam_poses.size()) + " camera poses");
  }
  if (hand_poses.size() < 3) throw ConfigError("hand-eye: at least 3 poses are required");

  std::vector<MotionPair> pairs;
  auto add = [&](std::size_t i, std::size_t j) {
    MotionPair p;
    p.hand = compose(inverse(hand_poses[j]), hand_poses[i]);
    p.camera = compose(cam_poses[j], inverse(cam_poses[i]));
    p.from = i;
    p.to = j;
    p.informative = log_rot(p.hand.rotation).norm() > kStillAngle;
    pairs.push_back(p);
  };
  const std::size_t n = hand_poses.size();
  if (pairing == Pairing::consecutive) {
    for (std::size_t i = 0; i + 1 < n; ++i) add(i, i + 1);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) add(i, j);
    }
  }
  require_independent_axes(pairs);
  return pairs;
}

double HandEyeResult::rms_rotation() const {
  if (residuals.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : residuals) s += r.rotation * r.rotation;
  return std::sqrt(s / static_cast<double>(residuals.size()));
}

double HandEyeResult::rms_translation() const {
  if (residuals.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : residuals) s += r.translation * r.translation;
  return std::sqrt(s / static_cast<double>(residuals.size()));
}

double rotation_objective(const std::vector<MotionPair>& pairs, const Eigen::Matrix3d& rotation) {
  double s = 0.0;
  for (const auto& p : pairs) {
    if (!p.informative) continue;
    s += (log_rot(p.hand.rotation) - rotation * log_rot(p.camera.rotation)).squaredNorm();
  }
  return s;
}

std::vector<PairResidual> hand_eye_residuals(const std::vector<MotionPair>& pairs, const Pose& x) {
  std::vector<PairResidual> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    const Pose ax = compose(p.hand, x);
    const Pose xb = compose(x, p.camera);
    PairResidual r;
    r.rotation = rotation_distance(ax.rotation, xb.rotation);
    r.translation = (ax.translation - xb.translation).norm();
    r.angle_mismatch = std::abs(log_rot(p.hand.rotation).norm() - log_rot(p.camera.rotation).norm());
    out.push_back(r);
  }
  return out;
}

HandEyeResult solve_hand_eye(const std::vector<MotionPair>& pairs, const HandEyeOptions& options) {
  require_independent_axes(pairs);

  Eigen::Matrix3d correlation = Eigen::Matrix3d::Zero();
  for (const auto& p : pairs) {
    if (!p.informative) continue;
    correlation += log_rot(p.camera.rotation) * log_rot(p.hand.rotation).transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(correlation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d fix = Eigen::Matrix3d::Identity();
  fix(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Eigen::Matrix3d rx = svd.matrixV() * fix * svd.matrixU().transpose();

  const auto rows = static_cast<Eigen::Index>(3 * pairs.size());
  Eigen::MatrixXd lhs(rows, 3);
  Eigen::VectorXd rhs(rows);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(3 * i);
    const auto& p = pairs[i];
    lhs.block<3, 3>(row, 0) = p.hand.rotation - Eigen::Matrix3d::Identity();
    rhs.segment<3>(row) = rx * p.camera.translation - p.hand.translation;
  }
  const Eigen::Vector3d tx = lhs.colPivHouseholderQr().solve(rhs);

  HandEyeResult result;
  result.transform = {rx, tx};
  result.residuals = hand_eye_residuals(pairs, result.transform);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (result.residuals[i].angle_mismatch > options.angle_tolerance) {
      std::ostringstream msg;
      msg << "pair " << pairs[i].from << "->" << pairs[i].to << ": rotation angles of A and B differ by "
          << result.residuals[i].angle_mismatch << " rad";
      result.warnings.push_back(msg.str());
    }
    if (!pairs[i].informative) {
      result.warnings.push_back("pair " + std::to_string(pairs[i].from) + "->" + std::to_string(pairs[i].to) +
                                ": hand did not rotate; ignored for rotation");
    }
  }
  return result;
}

std::vector<StampedPose> read_pose_log(std::istream& in) {
  std::vector<StampedPose> poses;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t record_offset = offset;
    offset += line.size() + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const char c = line[first];
    const bool numeric = (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
    if (!numeric && poses.empty()) continue;  // header

    std::vector<double> values;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      double v = 0.0;
      if (!parse_double(field, v)) {
        throw ParseError("pose log: bad number '" + field + "' at line " + std::to_string(line_no), line_no,
                         record_offset);
      }
      values.push_back(v);
    }
    if (values.size() != 8) {
      throw ParseError("pose log: expected 8 fields `t,x,y,z,qw,qx,qy,qz` at line " + std::to_string(line_no),
                       line_no, record_offset);
    }
    poses.push_back({values[0], Pose::from_quaternion(values[4], values[5], values[6], values[7],
                                                      {values[1], values[2], values[3]})});
  }
  return poses;
}

std::vector<StampedPose> read_pose_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pose log " + path.string());
  return read_pose_log(in);
}

void write_pose_log(std::ostream& out, const std::vector<StampedPose>& poses) {
  out << "# t,x,y,z,qw,qx,qy,qz\n" << std::setprecision(17);
  for (const auto& sp : poses) {
    const Eigen::Quaterniond q(sp.pose.rotation);
    const auto& t = sp.pose.translation;
    out << sp.t << ',' << t.x() << ',' << t.y() << ',' << t.z() << ',' << q.w() << ',' << q.x() << ',' << q.y()
        << ',' << q.z() << '\n';
  }
}

void write_hand_eye_report(std::ostream& out, const HandEyeResult& result) {
  const auto& x = result.transform;
  Eigen::Quaterniond q(x.rotation);
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  out << std::setprecision(12);
  out << "# hand-eye transform: camera frame expressed in the end-effector frame\n";
  out << "transform:\n";
  const Eigen::Matrix4d m = x.matrix();
  for (int r = 0; r < 4; ++r) {
    out << ' ';
    for (int c = 0; c < 4; ++c) out << ' ' << m(r, c);
    out << '\n';
  }
  out << "translation_m: " << x.translation.x() << ' ' << x.translation.y() << ' ' << x.translation.z() << '\n';
  out << "quaternion_wxyz: " << q.w() << ' ' << q.x() << ' ' << q.y() << ' ' << q.z() << '\n';
  out << "rms_rotation_rad: " << result.rms_rotation() << '\n';
  out << "rms_translation_m: " << result.rms_translation() << '\n';
  out << "pairs: " << result.residuals.size() << '\n';
  out << "# index rotation_residual_rad translation_residual_m angle_mismatch_rad\n";
  for (std::size_t i = 0; i < result.residuals.size(); ++i) {
    const auto& r = result.residuals[i];
    out << i << ' ' << r.rotation << ' ' << r.translation << ' ' << r.angle_mismatch << '\n';
  }
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
}

}  // namespace evstereo
