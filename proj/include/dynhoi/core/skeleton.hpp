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
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dynhoi/core/math.hpp"

namespace dynhoi {

enum class Hand : int { kLeft = 0, kRight = 1 };
inline constexpr std::array<Hand, 2> kHands = {Hand::kLeft, Hand::kRight};

struct Joint {
  std::string name;
  int parent = -1;  // -1 for the root
  Vec3 local_offset = Vec3::Zero();
};

// Joints are stored in topological order. Body joints come first, then the
// hand joints; hand_effectors names the joint that carries each hand's frame.
struct SkeletonSpec {
  std::vector<Joint> joints;
  int body_joint_count = 0;
  int hand_joint_count = 0;
  std::vector<int> interaction_joints;
  std::vector<int> foot_joints;
  int pelvis_joint = 0;
  std::array<int, 2> hand_effectors = {-1, -1};

  int joint_count() const { return static_cast<int>(joints.size()); }

  /// Actuated body DoF: three axis-angle components per non-root body joint.
  int body_dof() const { return 3 * (body_joint_count - 1); }

  int hand_effector(Hand h) const { return hand_effectors[static_cast<int>(h)]; }

  std::optional<int> find(const std::string& name) const {
    for (int i = 0; i < joint_count(); ++i)
      if (joints[i].name == name) return i;
    return std::nullopt;
  }

  int index_of(const std::string& name) const {
    auto idx = find(name);
    require(idx.has_value(), ErrorKind::kValidation, "unknown joint '" + name + "'");
    return *idx;
  }

  bool is_interaction_joint(int j) const {
    return std::find(interaction_joints.begin(), interaction_joints.end(), j) != interaction_joints.end();
  }

  /// Ancestors of j from its parent up to (and including) the root.
  std::vector<int> ancestors(int j) const {
    std::vector<int> out;
    for (int p = joints[j].parent; p >= 0; p = joints[p].parent) out.push_back(p);
    return out;
  }

  void validate() const {
    const int n = joint_count();
    require(n > 0, ErrorKind::kValidation, "skeleton has no joints");
    int roots = 0;
    for (int i = 0; i < n; ++i) {
      const Joint& jt = joints[i];
      if (jt.parent < 0) {
        ++roots;
      } else {
        require(jt.parent < i, ErrorKind::kValidation,
                "joint '" + jt.name + "' is not in topological order");
      }
      require(jt.local_offset.allFinite(), ErrorKind::kValidation, "joint '" + jt.name + "' offset not finite");
    }
    require(roots == 1, ErrorKind::kValidation, "skeleton must have exactly one root joint");
    require(joints[pelvis_joint].parent < 0, ErrorKind::kValidation, "pelvis joint must be the root");
    require(body_joint_count >= 1 && hand_joint_count >= 0 && body_joint_count + hand_joint_count == n,
            ErrorKind::kValidation, "body_joint_count + hand_joint_count must equal the joint count");
    auto in_range = [n](int j) { return j >= 0 && j < n; };
    for (int j : interaction_joints)
      require(in_range(j), ErrorKind::kValidation, "interaction joint index out of range");
    for (int j : foot_joints) require(in_range(j), ErrorKind::kValidation, "foot joint index out of range");
    for (int j : hand_effectors) require(in_range(j), ErrorKind::kValidation, "hand effector index out of range");
  }
};

inline std::vector<int> joint_indices(const SkeletonSpec& sk, const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& n : names) out.push_back(sk.index_of(n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Desk-scale stick figure: 16 body joints plus two rigid hand end-effectors.
/// z is up, x forward, y to the character's left; rest pose is a T-pose with
/// the ankles 0.90 m below the pelvis.
inline SkeletonSpec default_skeleton() {
  SkeletonSpec sk;
  auto add = [&sk](std::string name, int parent, Vec3 offset) {
    sk.joints.push_back({std::move(name), parent, offset});
  };
  add("pelvis", -1, {0, 0, 0});
  add("left_hip", 0, {0, 0.09, -0.07});
  add("left_knee", 1, {0, 0, -0.415});
  add("left_ankle", 2, {0, 0, -0.415});
  add("right_hip", 0, {0, -0.09, -0.07});
  add("right_knee", 4, {0, 0, -0.415});
  add("right_ankle", 5, {0, 0, -0.415});
  add("spine", 0, {0, 0, 0.12});
  add("thorax", 7, {0, 0, 0.22});
  add("neck", 8, {0, 0, 0.20});
  add("left_shoulder", 8, {0, 0.17, 0.14});
  add("left_elbow", 10, {0, 0.28, 0});
  add("left_wrist", 11, {0, 0.26, 0});
  add("right_shoulder", 8, {0, -0.17, 0.14});
  add("right_elbow", 13, {0, -0.28, 0});
  add("right_wrist", 14, {0, -0.26, 0});
  add("left_hand", 12, {0, 0.08, 0});
  add("right_hand", 15, {0, -0.08, 0});
  sk.body_joint_count = 16;
  sk.hand_joint_count = 2;
  sk.pelvis_joint = 0;
  sk.hand_effectors = {16, 17};
  sk.foot_joints = {3, 6};
  // The reduced hands have no articulation of their own, so each wrist's
  // interaction set carries its rigid hand effector along with it.
  sk.interaction_joints = joint_indices(
      sk, {"thorax", "left_shoulder", "right_shoulder", "left_elbow", "right_elbow", "left_wrist", "right_wrist",
           "left_hand", "right_hand"});
  return sk;
}

/// Named joint sets accepted by the planner front-end.
inline std::vector<int> named_joint_set(const SkeletonSpec& sk, const std::string& name) {
  if (name == "interaction" || name == "default") return sk.interaction_joints;
  if (name == "none") return {};
  if (name == "all") {
    std::vector<int> all(sk.joint_count());
    for (int i = 0; i < sk.joint_count(); ++i) all[i] = i;
    return all;
  }
  if (name == "arms") {
    std::vector<int> out;
    for (int i = 0; i < sk.joint_count(); ++i) {
      const auto& n = sk.joints[i].name;
      if (n.find("shoulder") != std::string::npos || n.find("elbow") != std::string::npos ||
          n.find("wrist") != std::string::npos || n.find("hand") != std::string::npos)
        out.push_back(i);
    }
    return out;
  }
  throw Error(ErrorKind::kValidation, "unknown joint set '" + name + "'");
}

}  // namespace dynhoi
