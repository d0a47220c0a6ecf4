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
#include <optional>
#include <random>
#include <vector>

#include "dynhoi/core/kinematics.hpp"
#include "dynhoi/sim/config.hpp"

namespace dynhoi::sim {

/// Rigid box inferred from the object's vertex list (object frame at the
/// centroid of the bounding box).
struct ObjectModel {
  std::vector<Vec3> vertices;
  Vec3 half_extents = Vec3::Zero();
  double mass = 0.0;
  Vec3 inertia = Vec3::Zero();
};

inline ObjectModel make_object(const std::vector<Vec3>& vertices, double density) {
  require(!vertices.empty(), ErrorKind::kValidation, "object has no vertices");
  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const Vec3& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  ObjectModel o;
  o.vertices = vertices;
  o.half_extents = 0.5 * (hi - lo);
  const Vec3 size = hi - lo;
  const double volume = size.prod();
  require(volume > 0.0, ErrorKind::kValidation, "object bounding box has zero volume");
  o.mass = density * volume;
  const Vec3 sq = size.cwiseAbs2();
  o.inertia = o.mass / 12.0 * Vec3(sq.y() + sq.z(), sq.x() + sq.z(), sq.x() + sq.y());
  return o;
}

/// Body point that can touch the ground: a joint plus an offset in its frame.
struct ContactSite {
  int joint = 0;
  Vec3 offset = Vec3::Zero();
};

/// Heel and toe corners under each ankle, then every joint origin.
inline std::vector<ContactSite> default_contact_sites(const SkeletonSpec& sk) {
  std::vector<ContactSite> sites;
  for (int foot : sk.foot_joints)
    for (double x : {-0.08, 0.12})
      for (double y : {-0.04, 0.04}) sites.push_back({foot, Vec3(x, y, 0.0)});
  for (int j = 0; j < sk.joint_count(); ++j) {
    if (std::find(sk.foot_joints.begin(), sk.foot_joints.end(), j) != sk.foot_joints.end()) continue;
    sites.push_back({j, Vec3::Zero()});
  }
  return sites;
}

struct SimModel {
  SkeletonSpec skeleton;
  SimParams params;
  ObjectModel object;
  std::array<std::optional<Vec3>, 2> grasp_points;  // object-local hand positions
  std::vector<ContactSite> contact_sites;

  int body_dof() const { return skeleton.body_dof(); }
  int hand_dof() const { return 2; }
  int action_dim() const { return body_dof() + hand_dof(); }
  /// Flat index of (joint, axis) in the body action / joint-state vectors.
  static int dof(int joint, int axis) { return 3 * (joint - 1) + axis; }
  int first_actuated() const { return 1; }
  int end_actuated() const { return skeleton.body_joint_count; }
};

/// Grasp points come from the first reference frame in which each hand
/// touches the object.
inline SimModel make_model(const HOIReference& reference, const SimParams& params) {
  reference.validate();
  const SkeletonSpec& sk = reference.human.skeleton;
  params.validate(sk);
  require(sk.pelvis_joint == 0, ErrorKind::kValidation, "harness expects the pelvis as joint 0");
  SimModel m;
  m.skeleton = sk;
  m.params = params;
  m.object = make_object(reference.object_vertices, params.config.object_density);
  m.contact_sites = default_contact_sites(sk);
  for (Hand h : kHands) {
    for (int n = 0; n < reference.size(); ++n) {
      if (!reference.contacts.hand(n, h)) continue;
      const Vec3 hand = hand_pose(sk, reference.human.frames[n], h).translation;
      m.grasp_points[static_cast<int>(h)] = invert(reference.object.poses[n].transform()).apply(hand);
      break;
    }
  }
  return m;
}

struct FrictionAnchor {
  bool active = false;
  Eigen::Vector2d xy = Eigen::Vector2d::Zero();
};

struct SimState {
  Vec3 root_position = Vec3::Zero();
  Quat root_rotation = Quat::Identity();
  Vec3 root_velocity = Vec3::Zero();
  Vec3 root_angular_velocity = Vec3::Zero();  // world frame
  VecX q;   // body DoF angles (axis-angle components), size body_dof
  VecX qd;

  Vec3 object_position = Vec3::Zero();
  Quat object_rotation = Quat::Identity();
  Vec3 object_velocity = Vec3::Zero();
  Vec3 object_angular_velocity = Vec3::Zero();

  std::array<bool, 2> attached = {false, false};
  int weld_hand = -1;  // hand the object is welded to, -1 when free
  RigidTransform weld_offset;  // object pose in the weld hand's frame

  std::vector<FrictionAnchor> body_anchors;
  std::vector<FrictionAnchor> object_anchors;
  int step = 0;

  RigidTransform root() const { return RigidTransform::from_pose(root_rotation, root_position); }
  RigidTransform object() const { return RigidTransform::from_pose(object_rotation, object_position); }
  bool holding() const { return weld_hand >= 0; }

  PoseFrame pose(const SkeletonSpec& sk) const {
    PoseFrame f = PoseFrame::rest(sk);
    f.root_position = root_position;
    f.root_rotation = root_rotation;
    for (int j = 1; j < sk.body_joint_count; ++j) f.joint_rotations[j] = q.segment<3>(SimModel::dof(j, 0));
    return f;
  }

  bool all_finite() const {
    return root_position.allFinite() && root_rotation.coeffs().allFinite() && root_velocity.allFinite() &&
           root_angular_velocity.allFinite() && q.allFinite() && qd.allFinite() && object_position.allFinite() &&
           object_rotation.coeffs().allFinite() && object_velocity.allFinite() && object_angular_velocity.allFinite();
  }
};

/// Joint transforms relative to the root (root at identity).
inline void local_fk(const SimModel& m, const VecX& q, std::vector<RigidTransform>& out) {
  const int body = m.skeleton.body_joint_count;
  forward_kinematics_into(m.skeleton, RigidTransform::identity(),
                          [&](int j) -> Vec3 { return j < body ? Vec3(q.segment<3>(SimModel::dof(j, 0))) : Vec3::Zero(); },
                          out);
}

inline void weld_to(const SimModel& m, SimState& s, int hand) {
  std::vector<RigidTransform> fk;
  local_fk(m, s.q, fk);
  const RigidTransform hand_world = compose(s.root(), fk[m.skeleton.hand_effectors[hand]]);
  s.weld_hand = hand;
  s.weld_offset = compose(invert(hand_world), s.object());
}

/// Reference frame 0 at rest, with a seeded perturbation of the root twist.
/// Hands touching the object in frame 0 start attached.
inline SimState initial_state(const SimModel& m, const HOIReference& reference, std::uint64_t seed) {
  const PoseFrame& f0 = reference.human.frames.front();
  SimState s;
  s.root_position = f0.root_position;
  s.root_rotation = f0.root_rotation.normalized();
  s.q = VecX::Zero(m.body_dof());
  s.qd = VecX::Zero(m.body_dof());
  for (int j = m.first_actuated(); j < m.end_actuated(); ++j) s.q.segment<3>(SimModel::dof(j, 0)) = f0.joint_rotations[j];
  s.object_position = reference.object.poses.front().position;
  s.object_rotation = reference.object.poses.front().rotation.normalized();
  s.body_anchors.assign(m.contact_sites.size(), {});
  s.object_anchors.assign(m.object.vertices.size(), {});

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> ang(0.0, m.params.config.init_angular_noise);
  std::normal_distribution<double> lin(0.0, m.params.config.init_linear_noise);
  const double wx = ang(rng), wy = ang(rng), wz = ang(rng);
  const double vx = lin(rng), vy = lin(rng);
  s.root_angular_velocity = Vec3(wx, wy, wz);
  s.root_velocity = Vec3(vx, vy, 0.0);

  for (Hand h : kHands) s.attached[static_cast<int>(h)] = reference.contacts.hand(0, h);
  for (int h = 0; h < 2; ++h)
    if (s.attached[h] && !s.holding()) weld_to(m, s, h);
  return s;
}

}  // namespace dynhoi::sim
