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

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dynhoi/core/kinematics.hpp"

namespace dynhoi::demo {

inline constexpr double kFps = 30.0;
inline constexpr int kFrames = 301;
inline constexpr double kGravity = 9.81;

/// Leg flexion a: hip -a, knee +2a, ankle -a about y keeps the shank and foot
/// under the hip with the sole flat. Returns the pelvis height above the soles.
inline double set_legs(const SkeletonSpec& sk, PoseFrame& f, double a) {
  for (const char* side : {"left", "right"}) {
    f.joint_rotations[sk.index_of(std::string(side) + "_hip")] = Vec3(0, -a, 0);
    f.joint_rotations[sk.index_of(std::string(side) + "_knee")] = Vec3(0, 2 * a, 0);
    f.joint_rotations[sk.index_of(std::string(side) + "_ankle")] = Vec3(0, -a, 0);
  }
  const double thigh = -sk.joints[sk.index_of("left_knee")].local_offset.z();
  const double shank = -sk.joints[sk.index_of("left_ankle")].local_offset.z();
  const double hip = -sk.joints[sk.index_of("left_hip")].local_offset.z();
  return hip + (thigh + shank) * std::cos(a);
}

/// Inverse of set_legs' height map.
inline double flexion_for_height(const SkeletonSpec& sk, double z) {
  const double thigh = -sk.joints[sk.index_of("left_knee")].local_offset.z();
  const double shank = -sk.joints[sk.index_of("left_ankle")].local_offset.z();
  const double hip = -sk.joints[sk.index_of("left_hip")].local_offset.z();
  return std::acos(std::clamp((z - hip) / (thigh + shank), -1.0, 1.0));
}

/// Damped least-squares position IK for one arm (shoulder and elbow), in the
/// pelvis frame, starting from the pose's current arm angles.
inline void solve_arm(const SkeletonSpec& sk, PoseFrame& f, Hand hand, const Vec3& target_in_pelvis) {
  const std::string side = hand == Hand::kLeft ? "left" : "right";
  const int shoulder = sk.index_of(side + "_shoulder"), elbow = sk.index_of(side + "_elbow");
  const int effector = sk.hand_effector(hand);
  PoseFrame local = f;
  local.root_position = Vec3::Zero();
  local.root_rotation = Quat::Identity();
  auto hand_at = [&](const PoseFrame& p) { return forward_kinematics(sk, p)[effector].translation; };
  for (int it = 0; it < 2000; ++it) {
    const Vec3 err = target_in_pelvis - hand_at(local);
    if (err.norm() < 1e-12) break;
    Eigen::Matrix<double, 3, 6> jac;
    for (int k = 0; k < 6; ++k) {
      PoseFrame p = local;
      p.joint_rotations[k < 3 ? shoulder : elbow](k % 3) += 1e-7;
      jac.col(k) = (hand_at(p) - hand_at(local)) / 1e-7;
    }
    Eigen::Matrix<double, 6, 1> dq =
        jac.transpose() * (jac * jac.transpose() + 1e-4 * Mat3::Identity()).ldlt().solve(err);
    if (dq.norm() > 0.05) dq *= 0.05 / dq.norm();
    for (int k = 0; k < 6; ++k) local.joint_rotations[k < 3 ? shoulder : elbow](k % 3) += dq(k);
  }
  f.joint_rotations[shoulder] = local.joint_rotations[shoulder];
  f.joint_rotations[elbow] = local.joint_rotations[elbow];
}

inline std::vector<Vec3> box_vertices(const Vec3& size) {
  std::vector<Vec3> v;
  for (double x : {-0.5, 0.5})
    for (double y : {-0.5, 0.5})
      for (double z : {-0.5, 0.5}) v.emplace_back(x * size.x(), y * size.y(), z * size.z());
  return v;
}

/// Upper-body carry pose: both arms forward with the hands on the side faces
/// of a box held in front of the chest.
inline void two_hand_carry_arms(const SkeletonSpec& sk, PoseFrame& f, const Vec3& box_center, double box_width) {
  const double reach = 0.5 * box_width + 0.02;
  f.joint_rotations[sk.index_of("left_shoulder")] = Vec3(0, 0, -kPi / 2);
  f.joint_rotations[sk.index_of("right_shoulder")] = Vec3(0, 0, kPi / 2);
  f.joint_rotations[sk.index_of("left_elbow")] = Vec3(0, 0, -0.5);
  f.joint_rotations[sk.index_of("right_elbow")] = Vec3(0, 0, 0.5);
  solve_arm(sk, f, Hand::kLeft, box_center + Vec3(0, reach, 0));
  solve_arm(sk, f, Hand::kRight, box_center - Vec3(0, reach, 0));
}

/// Pelvis height profile of a vertical jump. Times are in seconds from the
/// start of the crouch; heights in meters. The push and the landing use a
/// sin^2 acceleration pulse so the flight phase is exactly ballistic.
/// Pelvis height and knee-bend parameter (see set_legs) at one instant.
struct LegTrack {
  double height = 0.0;
  double flexion = 0.0;
};

/// Crouch, push off, fly, land, recover. The legs leave the ground still
/// bent and decelerate smoothly in the air, which keeps joint rates finite
/// (straightening fully at takeoff makes the knee rate singular).
struct JumpProfile {
  double start = 2.0;
  double crouch_time = 0.6;
  double hold = 0.2;
  double apex_gain = 0.15;       // apex above the standing height, meters
  double stand_flexion = 0.0;
  double crouch_flexion = 1.0;
  double takeoff_flexion = 0.45;
  double air_flexion = 0.1;      // least bend reached in the air
  double recover_hold = 0.2;
  double recover_time = 0.6;
  double hip_height = 0.07;      // pelvis above the hip line
  double leg_length = 0.83;      // thigh plus shank

  double height_at(double flexion) const { return hip_height + leg_length * std::cos(flexion); }
  double stand_height() const { return height_at(stand_flexion); }
  double takeoff_speed() const {
    return std::sqrt(2.0 * kGravity * (stand_height() + apex_gain - height_at(takeoff_flexion)));
  }
  double push_time() const { return 2.0 * (height_at(takeoff_flexion) - height_at(crouch_flexion)) / takeoff_speed(); }
  double flight_time() const { return 2.0 * takeoff_speed() / kGravity; }
  double end() const { return start + crouch_time + hold + 2 * push_time() + flight_time() + recover_hold + recover_time; }

  /// Leg extension rate at takeoff (negative: straightening) and the
  /// constant deceleration that brings it to rest at air_flexion.
  std::pair<double, double> takeoff_rate() const {
    const double rate = -takeoff_speed() / (leg_length * std::sin(takeoff_flexion));
    return {rate, rate * rate / (2.0 * (takeoff_flexion - air_flexion))};
  }

  LegTrack at(double t) const {
    auto ease = [](double s) { return 0.5 - 0.5 * std::cos(kPi * std::clamp(s, 0.0, 1.0)); };
    auto stance = [this](double z) {
      const double c = std::clamp((z - hip_height) / leg_length, -1.0, 1.0);
      return LegTrack{z, std::acos(c)};
    };
    const double z_stand = stand_height(), z_crouch = height_at(crouch_flexion), z_off = height_at(takeoff_flexion);
    double u = t - start;
    if (u < 0) return stance(z_stand);
    if (u < crouch_time) return stance(z_stand - (z_stand - z_crouch) * ease(u / crouch_time));
    u -= crouch_time;
    if (u < hold) return stance(z_crouch);
    u -= hold;
    const double tp = push_time(), v0 = takeoff_speed(), peak_acc = 2 * v0 / tp;
    // z(s) for a sin^2 pulse: acceleration peak_acc sin^2(pi s / tp).
    auto pulse = [&](double s) {
      return 0.5 * peak_acc * (0.5 * s * s - tp * tp / (4 * kPi * kPi) * (1 - std::cos(2 * kPi * s / tp)));
    };
    if (u < tp) return stance(z_crouch + pulse(u));
    u -= tp;
    const double tf = flight_time();
    if (u < tf) {
      const auto [rate, decel] = takeoff_rate();
      const double stop = -rate / decel;
      const double s = std::min(u, tf - u);  // landing mirrors takeoff
      const double a = s < stop ? takeoff_flexion + rate * s + 0.5 * decel * s * s : air_flexion;
      return {z_off + v0 * u - 0.5 * kGravity * u * u, a};
    }
    u -= tf;
    if (u < tp) return stance(z_crouch + pulse(tp - u));
    u -= tp;
    if (u < recover_hold) return stance(z_crouch);
    u -= recover_hold;
    return stance(z_crouch + (z_stand - z_crouch) * ease(u / recover_time));
  }
};

struct ClipSpec {
  std::string name;
  HOIReference reference;
  std::string style;  // success criterion the clip is judged by
};

inline HOIReference empty_reference(const SkeletonSpec& sk) {
  HOIReference ref;
  ref.human.skeleton = sk;
  ref.human.fps = kFps;
  ref.object.fps = kFps;
  return ref;
}

/// Two-hand carry with the given pelvis height track; the box follows the
/// left hand rigidly.
inline HOIReference two_hand_carry(const SkeletonSpec& sk, const std::function<LegTrack(double)>& legs,
                                   const Vec3& box_size) {
  HOIReference ref = empty_reference(sk);
  ref.object_vertices = box_vertices(box_size);
  const Vec3 box_in_pelvis(0.33, 0.0, 0.30);
  PoseFrame arms = PoseFrame::rest(sk);
  two_hand_carry_arms(sk, arms, box_in_pelvis, box_size.y());
  const RigidTransform hand0 = forward_kinematics(sk, arms)[sk.hand_effector(Hand::kLeft)];
  const RigidTransform box_in_hand = compose(invert(hand0), RigidTransform{Mat3::Identity(), box_in_pelvis});
  for (int n = 0; n < kFrames; ++n) {
    PoseFrame f = arms;
    const LegTrack track = legs(n / kFps);
    set_legs(sk, f, track.flexion);
    f.root_position = Vec3(0, 0, track.height);
    ref.human.frames.push_back(f);
    const RigidTransform hand = hand_pose(sk, f, Hand::kLeft);
    ref.object.poses.push_back(ObjectPose::from_transform(compose(hand, box_in_hand)));
    ref.contacts.frames.push_back({true, true});
  }
  return ref;
}

inline double stand_height(const SkeletonSpec& sk, double flexion) {
  PoseFrame f = PoseFrame::rest(sk);
  return set_legs(sk, f, flexion);
}

inline HOIReference carry_stand(const SkeletonSpec& sk) {
  const double base = stand_height(sk, 0.15);
  auto track = [&sk, base](double t) {
    const double z = base - 0.01 * (1 - std::cos(2 * kPi * t / 4.0));
    return LegTrack{z, flexion_for_height(sk, z)};
  };
  return two_hand_carry(sk, track, Vec3(0.3, 0.3, 0.3));
}

inline std::vector<JumpProfile> carry_jump_profiles(const SkeletonSpec& sk, double apex_gain = 0.15) {
  JumpProfile a;
  const int knee = sk.index_of("left_knee"), ankle = sk.index_of("left_ankle"), hip = sk.index_of("left_hip");
  a.hip_height = -sk.joints[hip].local_offset.z();
  a.leg_length = -sk.joints[knee].local_offset.z() - sk.joints[ankle].local_offset.z();
  a.apex_gain = apex_gain;
  a.start = 2.0;
  JumpProfile b = a;
  b.start = 5.8;
  return {a, b};
}

inline std::function<LegTrack(double)> jump_track(std::vector<JumpProfile> jumps) {
  return [jumps](double t) {
    for (const JumpProfile& j : jumps)
      if (t >= j.start && t < j.end()) return j.at(t);
    return jumps.front().at(-1e9);
  };
}

inline HOIReference carry_jump(const SkeletonSpec& sk) {
  return two_hand_carry(sk, jump_track(carry_jump_profiles(sk)), Vec3(0.3, 0.3, 0.3));
}

/// Right hand carrying a small box at the side during slow knee bends.
inline HOIReference one_hand_carry(const SkeletonSpec& sk) {
  HOIReference ref = empty_reference(sk);
  const Vec3 size(0.2, 0.2, 0.2);
  ref.object_vertices = box_vertices(size);
  PoseFrame arms = PoseFrame::rest(sk);
  arms.joint_rotations[sk.index_of("left_shoulder")] = Vec3(-1.2, 0, 0);
  arms.joint_rotations[sk.index_of("right_shoulder")] = Vec3(1.1, 0, 0);
  arms.joint_rotations[sk.index_of("right_elbow")] = Vec3(0, 0, 0.3);
  solve_arm(sk, arms, Hand::kRight, Vec3(0.10, -0.30, 0.02));
  const RigidTransform hand0 = forward_kinematics(sk, arms)[sk.hand_effector(Hand::kRight)];
  const RigidTransform box_in_hand =
      compose(invert(hand0), RigidTransform{Mat3::Identity(), Vec3(0.10, -0.30 - 0.5 * size.y() - 0.02, 0.02)});
  for (int n = 0; n < kFrames; ++n) {
    PoseFrame f = arms;
    const double a = 0.25 - 0.15 * std::cos(2 * kPi * (n / kFps) / 3.0);
    f.root_position = Vec3(0, 0, set_legs(sk, f, a));
    ref.human.frames.push_back(f);
    ref.object.poses.push_back(ObjectPose::from_transform(compose(hand_pose(sk, f, Hand::kRight), box_in_hand)));
    ref.contacts.frames.push_back({false, true});
  }
  return ref;
}

/// Plain jumps (no object) used as the toy motion prior. Seeded jitter on
/// apex height and timing gives the library some spread.
inline std::vector<MotionClip> jump_library(const SkeletonSpec& sk, std::uint64_t seed = 7, int count = 4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gain(0.1, 0.2), shift(-0.3, 0.3);
  std::vector<MotionClip> out;
  for (int i = 0; i < count; ++i) {
    auto jumps = carry_jump_profiles(sk, gain(rng));
    const double dt = shift(rng);
    for (auto& j : jumps) j.start += dt;
    const auto track = jump_track(jumps);
    MotionClip clip;
    clip.skeleton = sk;
    clip.fps = kFps;
    for (int n = 0; n < kFrames; ++n) {
      PoseFrame f = PoseFrame::rest(sk);
      f.joint_rotations[sk.index_of("left_shoulder")] = Vec3(0, 0, -1.2);
      f.joint_rotations[sk.index_of("right_shoulder")] = Vec3(0, 0, 1.2);
      const LegTrack legs = track(n / kFps);
      set_legs(sk, f, legs.flexion);
      f.root_position = Vec3(0, 0, legs.height);
      clip.frames.push_back(f);
    }
    out.push_back(std::move(clip));
  }
  return out;
}

inline std::vector<ClipSpec> demo_clips(const SkeletonSpec& sk = default_skeleton()) {
  return {{"carry_stand", carry_stand(sk), "dance"},
          {"carry_jump", carry_jump(sk), "jump_forward"},
          {"one_hand_carry", one_hand_carry(sk), "dance"}};
}

}  // namespace dynhoi::demo
