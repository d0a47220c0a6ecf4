// Copyright 2026 The dynhoi Authors
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

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "dynhoi/core/error.hpp"

namespace dynhoi {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Rotation for an axis-angle (rotation) vector; the zero vector maps to identity.
inline Quat quat_from_axis_angle(const Vec3& aa) {
  const double angle = aa.norm();
  if (angle < 1e-300) return Quat::Identity();
  return Quat(Eigen::AngleAxisd(angle, aa / angle));
}

/// Inverse of quat_from_axis_angle with the angle folded into [0, pi].
inline Vec3 axis_angle_from_quat(Quat q) {
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Vec3 v = q.vec();
  const double s = v.norm();
  if (s < 1e-300) return Vec3::Zero();
  const double angle = 2.0 * std::atan2(s, q.w());
  return v * (angle / s);
}

inline Mat3 matrix_from_axis_angle(const Vec3& aa) {
  return quat_from_axis_angle(aa).toRotationMatrix();
}

inline Quat quat_from_matrix(const Mat3& r) {
  Quat q(r);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return q;
}

/// Geodesic distance on SO(3) in radians.
inline double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

inline bool is_rotation(const Mat3& r, double tol = 1e-6) {
  return std::abs(r.determinant() - 1.0) <= tol &&
         (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// Proper rigid motion x -> R x + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  static RigidTransform from_pose(const Quat& q, const Vec3& t) {
    return {q.normalized().toRotationMatrix(), t};
  }

  Quat quaternion() const { return quat_from_matrix(rotation); }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  void validate(double tol = 1e-6) const {
    require(is_rotation(rotation, tol), ErrorKind::kValidation,
            "rigid transform rotation is not orthonormal with det +1");
    require(translation.allFinite(), ErrorKind::kValidation, "rigid transform translation is not finite");
  }
};

/// (a ∘ b)(x) = a(b(x)).
inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

inline RigidTransform invert(const RigidTransform& a) {
  const Mat3 rt = a.rotation.transpose();
  return {rt, -(rt * a.translation)};
}

inline std::vector<Vec3> transform_points(const RigidTransform& a, std::span<const Vec3> points) {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const Vec3& p : points) out.push_back(a.apply(p));
  return out;
}

inline RigidTransform checked_compose(const RigidTransform& a, const RigidTransform& b) {
  a.validate();
  b.validate();
  return compose(a, b);
}

inline RigidTransform checked_invert(const RigidTransform& a) {
  a.validate();
  return invert(a);
}

}  // namespace dynhoi
