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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dynhoi/core/kinematics.hpp"
#include "dynhoi/core/motion.hpp"

namespace dynhoi::metrics {

/// Foot-floor contact detector shared by Skate and the jump criterion.
struct FootContactSpec {
  double max_height = 0.03;        // m
  double max_vertical_speed = 0.1;  // m/s
};

/// First frame with any hand contact, if there is one.
inline std::optional<int> first_contact_frame(const ContactMask& contacts) {
  for (int n = 0; n < contacts.size(); ++n)
    if (contacts.any(n)) return n;
  return std::nullopt;
}

/// Fraction of frames in [begin, end) with any hand in contact.
inline double contact_percentage(const ContactMask& contacts, int begin, int end) {
  end = std::min(end, contacts.size());
  require(begin >= 0 && begin < end, ErrorKind::kUndefinedMetric, "contact percentage over an empty window");
  int hits = 0;
  for (int n = begin; n < end; ++n) hits += contacts.any(n) ? 1 : 0;
  return static_cast<double>(hits) / (end - begin);
}

inline double contact_percentage(const ContactMask& contacts, int begin = 0) {
  return contact_percentage(contacts, begin, contacts.size());
}

/// Spread of object vertices expressed in the contacting hand's frame. A
/// frame with both hands in contact is measured in the left hand's frame
/// (the hand the simulator welds to); statistics are kept per hand over the
/// contact frames in [begin, end). Per vertex, the
/// population standard deviations of the three axes are combined as
/// sqrt(sx^2 + sy^2 + sz^2) (the RMS distance from the mean position); the
/// result is the mean over hands and vertices.
inline double contact_consistency(const HOIReference& traj, int begin = 0, int end = -1) {
  if (end < 0 || end > traj.size()) end = traj.size();
  require(static_cast<int>(traj.contacts.size()) == traj.size() && traj.object.size() == traj.size(),
          ErrorKind::kStructural, "trajectory tracks have different lengths");
  require(!traj.object_vertices.empty(), ErrorKind::kUndefinedMetric, "object has no vertices");
  const SkeletonSpec& sk = traj.human.skeleton;
  const int nv = static_cast<int>(traj.object_vertices.size());
  double total = 0.0;
  int groups = 0;
  for (Hand h : {Hand::kLeft, Hand::kRight}) {
    std::vector<std::vector<Vec3>> local_vertices;
    for (int n = std::max(begin, 0); n < end; ++n) {
      const bool primary = h == Hand::kLeft ? traj.contacts.hand(n, h)
                                            : traj.contacts.hand(n, h) && !traj.contacts.hand(n, Hand::kLeft);
      if (!primary) continue;
      const RigidTransform local =
          compose(invert(hand_pose(sk, traj.human.frames[n], h)), traj.object.poses[n].transform());
      local_vertices.push_back(transform_points(local, traj.object_vertices));
    }
    const int count = static_cast<int>(local_vertices.size());
    if (count < 2) continue;
    for (int i = 0; i < nv; ++i) {
      Vec3 mean = Vec3::Zero();
      for (const auto& f : local_vertices) mean += f[i];
      mean /= count;
      Vec3 var = Vec3::Zero();
      for (const auto& f : local_vertices) var += (f[i] - mean).cwiseAbs2();
      total += std::sqrt(var.sum() / count);
      ++groups;
    }
  }
  require(groups > 0, ErrorKind::kUndefinedMetric, "contact consistency needs at least two contact frames");
  return total / groups;
}

namespace detail {

/// Third derivative of a sampled signal at frame n: central five-point
/// stencil in the interior, four-point one-sided stencils at the ends.
template <typename T>
T third_difference(const std::vector<T>& x, int n, double dt) {
  const int size = static_cast<int>(x.size());
  if (n >= 2 && n + 2 < size)
    return (x[n + 2] - 2.0 * x[n + 1] + 2.0 * x[n - 1] - x[n - 2]) / (2.0 * dt * dt * dt);
  const int s = n < 2 ? std::min(n, size - 4) : std::max(n - 3, 0);
  return (x[s + 3] - 3.0 * x[s + 2] + 3.0 * x[s + 1] - x[s]) / (dt * dt * dt);
}

inline void require_length(int frames, const char* what) {
  require(frames >= 4, ErrorKind::kUndefinedMetric, std::string(what) + " needs at least 4 frames");
}

}  // namespace detail

/// Mean norm of the third derivative of joint positions, m/s^3.
inline double jitter_pos(const MotionClip& clip) {
  detail::require_length(clip.size(), "jitter");
  const auto pos = clip_joint_positions(clip);
  const int nj = clip.skeleton.joint_count();
  double total = 0.0;
  std::vector<Vec3> track(clip.size());
  for (int j = 0; j < nj; ++j) {
    for (int n = 0; n < clip.size(); ++n) track[n] = pos[n][j];
    for (int n = 0; n < clip.size(); ++n) total += detail::third_difference(track, n, clip.dt()).norm();
  }
  return total / (static_cast<double>(nj) * clip.size());
}

/// Mean absolute third derivative over every rotational DoF of the non-root
/// body joints, rad/s^3.
inline double jitter_dof(const MotionClip& clip) {
  detail::require_length(clip.size(), "jitter");
  const SkeletonSpec& sk = clip.skeleton;
  double total = 0.0;
  std::vector<double> track(clip.size());
  int dofs = 0;
  for (int j = 0; j < sk.body_joint_count; ++j) {
    if (j == sk.pelvis_joint) continue;
    for (int a = 0; a < 3; ++a, ++dofs) {
      for (int n = 0; n < clip.size(); ++n) track[n] = clip.frames[n].joint_rotations[j](a);
      for (int n = 0; n < clip.size(); ++n) total += std::abs(detail::third_difference(track, n, clip.dt()));
    }
  }
  return total / (static_cast<double>(dofs) * clip.size());
}

/// Per-frame contact flags of each foot joint (outer index follows
/// skeleton.foot_joints).
inline std::vector<std::vector<bool>> foot_contacts(const MotionClip& clip, const FootContactSpec& spec = {}) {
  const auto pos = clip_joint_positions(clip);
  std::vector<std::vector<bool>> out;
  for (int j : clip.skeleton.foot_joints) {
    std::vector<bool> c(clip.size(), false);
    for (int n = 0; n < clip.size(); ++n) {
      double vz = 0.0;
      if (clip.size() > 1) {
        const int a = n == 0 ? 0 : n - 1;
        const int b = n == 0 ? 1 : n;
        vz = (pos[b][j].z() - pos[a][j].z()) * clip.fps;
      }
      c[n] = pos[n][j].z() < spec.max_height && std::abs(vz) < spec.max_vertical_speed;
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct Plausibility {
  double pene_obj_cm = 0.0;
  double skate_mm = 0.0;
  double float_mm = 0.0;
  double jitter_pos = 0.0;
};

inline Plausibility physical_plausibility(const HOIReference& traj, const FootContactSpec& feet = {}) {
  const MotionClip& clip = traj.human;
  detail::require_length(clip.size(), "physical plausibility");
  require(traj.object.size() == clip.size(), ErrorKind::kStructural, "object track length differs");
  Plausibility out;
  const auto pos = clip_joint_positions(clip);

  for (int n = 0; n < clip.size(); ++n) {
    double lowest = std::numeric_limits<double>::infinity();
    const RigidTransform obj = traj.object.poses[n].transform();
    for (const Vec3& v : traj.object_vertices) lowest = std::min(lowest, obj.apply(v).z());
    if (!traj.object_vertices.empty()) out.pene_obj_cm += std::max(0.0, -lowest);
    double low_joint = std::numeric_limits<double>::infinity();
    for (const Vec3& p : pos[n]) low_joint = std::min(low_joint, p.z());
    out.float_mm += std::max(0.0, low_joint);
  }
  out.pene_obj_cm *= 100.0 / clip.size();
  out.float_mm *= 1000.0 / clip.size();

  const auto contact = foot_contacts(clip, feet);
  double slide = 0.0;
  int samples = 0;
  for (std::size_t f = 0; f < contact.size(); ++f) {
    const int j = clip.skeleton.foot_joints[f];
    for (int n = 1; n < clip.size(); ++n) {
      if (!contact[f][n]) continue;
      slide += (pos[n][j] - pos[n - 1][j]).head<2>().norm();
      ++samples;
    }
  }
  out.skate_mm = samples > 0 ? 1000.0 * slide / samples : 0.0;
  out.jitter_pos = jitter_pos(clip);
  return out;
}

/// Mean per-frame distance over the non-pelvis body joints and the object
/// position, after mapping the executed motion onto the reference by the
/// frame-0 pelvis transform.
inline double e_hoi(const HOIReference& executed, const HOIReference& reference) {
  require(executed.size() == reference.size(), ErrorKind::kStructural,
          "executed has " + std::to_string(executed.size()) + " frames, reference has " +
              std::to_string(reference.size()));
  require(executed.size() > 0, ErrorKind::kUndefinedMetric, "empty trajectory");
  const SkeletonSpec& sk = reference.human.skeleton;
  const auto pelvis = [&](const PoseFrame& f) { return RigidTransform::from_pose(f.root_rotation, f.root_position); };
  const RigidTransform align =
      compose(pelvis(reference.human.frames[0]), invert(pelvis(executed.human.frames[0])));
  double total = 0.0;
  int terms = 0;
  for (int n = 0; n < reference.size(); ++n) {
    const auto e = joint_positions(executed.human.skeleton, executed.human.frames[n]);
    const auto r = joint_positions(sk, reference.human.frames[n]);
    double frame = 0.0;
    terms = 0;
    for (int j = 0; j < sk.body_joint_count; ++j) {
      if (j == sk.pelvis_joint) continue;
      frame += (align.apply(e[j]) - r[j]).norm();
      ++terms;
    }
    frame += (align.apply(executed.object.poses[n].position) - reference.object.poses[n].position).norm();
    total += frame / (terms + 1);
  }
  return total / reference.size();
}

}  // namespace dynhoi::metrics
