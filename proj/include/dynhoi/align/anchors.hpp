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

#include <optional>
#include <vector>

#include "dynhoi/align/kabsch.hpp"
#include "dynhoi/core/kinematics.hpp"
#include "dynhoi/core/motion.hpp"

namespace dynhoi::align {

enum class AnchorFrameKind { kObjectLocal, kHandLocal, kWorld };

struct AnchorSet {
  std::vector<Vec3> points;
  AnchorFrameKind frame = AnchorFrameKind::kObjectLocal;
  // Hand the anchors belong to. Required for hand-local sets; for object-local
  // sets it names the hand that will carry them.
  Hand hand = Hand::kLeft;

  int size() const { return static_cast<int>(points.size()); }
};

inline void expect_frame(const AnchorSet& a, AnchorFrameKind kind, const char* op) {
  require(a.frame == kind, ErrorKind::kUsage, std::string(op) + ": anchor set is in the wrong coordinate frame");
}

inline AnchorSet anchors_to_hand_frame(const AnchorSet& object_local, const RigidTransform& object_pose_at_onset,
                                       const RigidTransform& hand_pose_at_onset) {
  expect_frame(object_local, AnchorFrameKind::kObjectLocal, "anchors_to_hand_frame");
  const RigidTransform object_in_hand = compose(invert(hand_pose_at_onset), object_pose_at_onset);
  return {transform_points(object_in_hand, object_local.points), AnchorFrameKind::kHandLocal, object_local.hand};
}

inline AnchorSet anchors_to_world(const AnchorSet& hand_local, const RigidTransform& hand_pose) {
  expect_frame(hand_local, AnchorFrameKind::kHandLocal, "anchors_to_world");
  return {transform_points(hand_pose, hand_local.points), AnchorFrameKind::kWorld, hand_local.hand};
}

struct AnchorLayout {
  int count = 4;             // 4 gives the corners of a square
  double square_size = 0.04; // edge length of the palm square, meters
};

/// Anchor points in the hand frame, lying in the palm (local x-y) plane.
inline std::vector<Vec3> palm_anchor_points(const AnchorLayout& layout) {
  require(layout.count >= 3, ErrorKind::kConfiguration, "need at least 3 anchors per hand");
  require(layout.square_size > 0.0, ErrorKind::kConfiguration, "anchor square size must be positive");
  const double h = 0.5 * layout.square_size;
  if (layout.count == 4) return {{h, h, 0}, {-h, h, 0}, {-h, -h, 0}, {h, -h, 0}};
  std::vector<Vec3> pts;
  const double radius = h * std::sqrt(2.0);
  for (int i = 0; i < layout.count; ++i) {
    const double a = 2.0 * kPi * i / layout.count + 0.25 * kPi;
    pts.emplace_back(radius * std::cos(a), radius * std::sin(a), 0.0);
  }
  return pts;
}

/// Hands holding the object at the onset frame (falls back to the first
/// contact frame when the onset frame itself has none).
inline std::vector<Hand> contacting_hands(const HOIReference& reference, int n_onset) {
  auto at = [&](int n) {
    std::vector<Hand> hands;
    for (Hand h : kHands)
      if (reference.contacts.hand(n, h)) hands.push_back(h);
    return hands;
  };
  if (auto hands = at(n_onset); !hands.empty()) return hands;
  for (int n = 0; n < reference.size(); ++n)
    if (auto hands = at(n); !hands.empty()) return hands;
  throw Error(ErrorKind::kNoInteraction, "reference never reports hand contact");
}

/// Default object-local anchors: the palm square of every contacting hand,
/// carried into the object frame by the reference poses at onset.
inline std::vector<AnchorSet> default_object_anchors(const HOIReference& reference, int n_onset,
                                                     const AnchorLayout& layout = {}) {
  const auto& sk = reference.human.skeleton;
  const RigidTransform object_inv = invert(reference.object.poses[n_onset].transform());
  const auto fk = forward_kinematics(sk, reference.human.frames[n_onset]);
  std::vector<AnchorSet> sets;
  for (Hand h : contacting_hands(reference, n_onset)) {
    const RigidTransform hand_in_object = compose(object_inv, fk[sk.hand_effector(h)]);
    sets.push_back({transform_points(hand_in_object, palm_anchor_points(layout)), AnchorFrameKind::kObjectLocal, h});
  }
  return sets;
}

struct RecoveredTrajectory {
  ObjectTrajectory object;
  std::vector<double> residuals;  // per frame, 0 for copied frames
  std::vector<bool> degenerate;
};

/// Object poses from the planned human motion: copied from the reference up
/// to the onset, then per-frame Kabsch fits of the object-local anchors onto
/// where the hands now place them. Two hands are stacked into one fit.
inline RecoveredTrajectory recover_object_trajectory(const MotionClip& human, const HOIReference& reference,
                                                     const std::vector<AnchorSet>& anchors_object_local,
                                                     int n_onset) {
  require(human.size() == reference.size(), ErrorKind::kStructural, "planned motion and reference lengths differ");
  require(n_onset >= 0 && n_onset < reference.size(), ErrorKind::kValidation, "onset frame out of range");
  require(!anchors_object_local.empty(), ErrorKind::kValidation, "no anchor sets given");
  const auto& sk = human.skeleton;

  const RigidTransform object_onset = reference.object.poses[n_onset].transform();
  const auto ref_fk = forward_kinematics(reference.human.skeleton, reference.human.frames[n_onset]);
  std::vector<AnchorSet> hand_local;
  std::vector<Vec3> source;
  for (const AnchorSet& a : anchors_object_local) {
    expect_frame(a, AnchorFrameKind::kObjectLocal, "recover_object_trajectory");
    require(a.size() >= 3, ErrorKind::kValidation, "need at least 3 anchors per contacting hand");
    hand_local.push_back(anchors_to_hand_frame(a, object_onset, ref_fk[reference.human.skeleton.hand_effector(a.hand)]));
    source.insert(source.end(), a.points.begin(), a.points.end());
  }

  RecoveredTrajectory out;
  out.object.fps = reference.object.fps;
  out.object.poses.reserve(human.size());
  for (int n = 0; n < human.size(); ++n) {
    if (n <= n_onset) {
      out.object.poses.push_back(reference.object.poses[n]);
      out.residuals.push_back(0.0);
      out.degenerate.push_back(false);
      continue;
    }
    const auto fk = forward_kinematics(sk, human.frames[n]);
    std::vector<Vec3> target;
    target.reserve(source.size());
    for (const AnchorSet& a : hand_local) {
      const AnchorSet world = anchors_to_world(a, fk[sk.hand_effector(a.hand)]);
      target.insert(target.end(), world.points.begin(), world.points.end());
    }
    const KabschResult fit = kabsch_align(source, target);
    out.object.poses.push_back(ObjectPose::from_transform(fit.transform));
    out.residuals.push_back(fit.residual);
    out.degenerate.push_back(fit.degenerate);
  }
  return out;
}

/// Planned human motion paired with its recovered object track. After the
/// onset the hands that carry anchors are marked in contact.
inline HOIReference align_reference(const MotionClip& human, const HOIReference& reference,
                                    const std::vector<AnchorSet>& anchors_object_local, int n_onset) {
  HOIReference out;
  out.human = human;
  out.object = recover_object_trajectory(human, reference, anchors_object_local, n_onset).object;
  out.object_vertices = reference.object_vertices;
  out.contacts = reference.contacts;
  std::array<bool, 2> held = {false, false};
  for (const AnchorSet& a : anchors_object_local) held[static_cast<int>(a.hand)] = true;
  for (int n = n_onset + 1; n < out.size(); ++n) out.contacts.frames[n] = held;
  return out;
}

}  // namespace dynhoi::align
