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

#include <vector>

#include "dynhoi/core/motion.hpp"

namespace dynhoi {

/// World transforms of every joint, in joint order. rotation_of(j) supplies
/// the axis-angle rotation of non-root joint j.
template <typename RotationOf>
void forward_kinematics_into(const SkeletonSpec& sk, const RigidTransform& root, RotationOf&& rotation_of,
                             std::vector<RigidTransform>& out) {
  const int n = sk.joint_count();
  out.resize(n);
  for (int j = 0; j < n; ++j) {
    const Joint& jt = sk.joints[j];
    if (jt.parent < 0) {
      out[j] = root;
      continue;
    }
    const RigidTransform& p = out[jt.parent];
    out[j].translation = p.rotation * jt.local_offset + p.translation;
    out[j].rotation = p.rotation * matrix_from_axis_angle(rotation_of(j));
  }
}

inline std::vector<RigidTransform> forward_kinematics(const SkeletonSpec& sk, const PoseFrame& frame) {
  require(static_cast<int>(frame.joint_rotations.size()) == sk.joint_count(), ErrorKind::kStructural,
          "pose has " + std::to_string(frame.joint_rotations.size()) + " joint rotations, skeleton has " +
              std::to_string(sk.joint_count()));
  std::vector<RigidTransform> out;
  forward_kinematics_into(sk, RigidTransform::from_pose(frame.root_rotation, frame.root_position),
                          [&frame](int j) -> const Vec3& { return frame.joint_rotations[j]; }, out);
  return out;
}

inline std::vector<Vec3> joint_positions(const SkeletonSpec& sk, const PoseFrame& frame) {
  std::vector<Vec3> out;
  for (const auto& t : forward_kinematics(sk, frame)) out.push_back(t.translation);
  return out;
}

/// Joint world positions for every frame of a clip.
inline std::vector<std::vector<Vec3>> clip_joint_positions(const MotionClip& clip) {
  std::vector<std::vector<Vec3>> out;
  out.reserve(clip.frames.size());
  for (const auto& f : clip.frames) out.push_back(joint_positions(clip.skeleton, f));
  return out;
}

inline RigidTransform hand_pose(const SkeletonSpec& sk, const PoseFrame& frame, Hand h) {
  return forward_kinematics(sk, frame)[sk.hand_effector(h)];
}

}  // namespace dynhoi
