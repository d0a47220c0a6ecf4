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

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "dynhoi/core/math.hpp"
#include "dynhoi/core/skeleton.hpp"

namespace dynhoi {

inline constexpr double kUnitQuatTolerance = 1e-6;

struct PoseFrame {
  Vec3 root_position = Vec3::Zero();
  Quat root_rotation = Quat::Identity();
  // One axis-angle vector per skeleton joint. The root's orientation lives in
  // root_rotation; its slot here is kept for layout parity and is not used by
  // kinematics.
  std::vector<Vec3> joint_rotations;

  static PoseFrame rest(const SkeletonSpec& sk) {
    PoseFrame f;
    f.joint_rotations.assign(sk.joint_count(), Vec3::Zero());
    return f;
  }

  bool operator==(const PoseFrame& o) const {
    return root_position == o.root_position && root_rotation.coeffs() == o.root_rotation.coeffs() &&
           joint_rotations == o.joint_rotations;
  }
};

struct MotionClip {
  SkeletonSpec skeleton;
  std::vector<PoseFrame> frames;
  double fps = 30.0;

  int size() const { return static_cast<int>(frames.size()); }
  double dt() const { return 1.0 / fps; }

  void validate() const {
    skeleton.validate();
    require(!frames.empty(), ErrorKind::kValidation, "empty clip");
    require(fps > 0.0 && std::isfinite(fps), ErrorKind::kValidation, "fps must be positive");
    for (int n = 0; n < size(); ++n) {
      const PoseFrame& f = frames[n];
      const std::string at = " at frame " + std::to_string(n);
      require(static_cast<int>(f.joint_rotations.size()) == skeleton.joint_count(), ErrorKind::kStructural,
              "joint count mismatch" + at);
      require(std::abs(f.root_rotation.norm() - 1.0) <= kUnitQuatTolerance, ErrorKind::kValidation,
              "non-unit root quaternion" + at);
      require(f.root_position.allFinite(), ErrorKind::kValidation, "non-finite root position" + at);
      for (const Vec3& aa : f.joint_rotations)
        require(aa.allFinite(), ErrorKind::kValidation, "non-finite joint rotation" + at);
    }
  }
};

struct ObjectPose {
  Vec3 position = Vec3::Zero();
  Quat rotation = Quat::Identity();

  RigidTransform transform() const { return RigidTransform::from_pose(rotation, position); }
  static ObjectPose from_transform(const RigidTransform& t) { return {t.translation, t.quaternion()}; }

  bool operator==(const ObjectPose& o) const {
    return position == o.position && rotation.coeffs() == o.rotation.coeffs();
  }
};

struct ObjectTrajectory {
  std::vector<ObjectPose> poses;
  double fps = 30.0;

  int size() const { return static_cast<int>(poses.size()); }

  void validate() const {
    require(fps > 0.0, ErrorKind::kValidation, "object fps must be positive");
    for (int n = 0; n < size(); ++n) {
      require(std::abs(poses[n].rotation.norm() - 1.0) <= kUnitQuatTolerance, ErrorKind::kValidation,
              "non-unit object quaternion at frame " + std::to_string(n));
      require(poses[n].position.allFinite(), ErrorKind::kValidation,
              "non-finite object position at frame " + std::to_string(n));
    }
  }
};

/// Per-frame [left, right] hand contact flags.
struct ContactMask {
  std::vector<std::array<bool, 2>> frames;

  int size() const { return static_cast<int>(frames.size()); }
  bool any(int n) const { return frames[n][0] || frames[n][1]; }
  bool hand(int n, Hand h) const { return frames[n][static_cast<int>(h)]; }
};

struct HOIReference {
  MotionClip human;
  ObjectTrajectory object;
  ContactMask contacts;
  std::vector<Vec3> object_vertices;  // object-local, meters

  int size() const { return human.size(); }

  void validate() const {
    human.validate();
    object.validate();
    require(object.size() == human.size() && contacts.size() == human.size(), ErrorKind::kStructural,
            "human, object and contact tracks must have equal frame counts");
    require(object.fps == human.fps, ErrorKind::kStructural, "human and object fps differ");
    for (const Vec3& v : object_vertices)
      require(v.allFinite(), ErrorKind::kValidation, "non-finite object vertex");
  }
};

}  // namespace dynhoi
