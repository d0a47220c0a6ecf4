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

#include "dynhoi/sim/model.hpp"

namespace dynhoi::sim {

namespace detail {

struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();  // about the body's reference point
};

/// Penalty normal force with a stick-slip tangential spring. Updates the
/// anchor in place; returns the contact force on the point.
inline Vec3 ground_contact(const Vec3& p, const Vec3& v, double kn, double cn, double kt, double ct, double mu,
                           FrictionAnchor& anchor) {
  const double depth = -p.z();
  if (depth <= 0.0) {
    anchor.active = false;
    return Vec3::Zero();
  }
  const double fn = std::max(0.0, kn * depth - cn * v.z());
  if (!anchor.active) {
    anchor.active = true;
    anchor.xy = p.head<2>();
  }
  Eigen::Vector2d ft = -kt * (p.head<2>() - anchor.xy) - ct * v.head<2>();
  const double limit = mu * fn;
  const double mag = ft.norm();
  if (mag > limit) {
    ft *= limit / mag;
    anchor.xy = p.head<2>() + ft / kt;  // slide so the spring alone carries the limit
  }
  return Vec3(ft.x(), ft.y(), fn);
}

inline Quat integrate_rotation(const Quat& q, const Vec3& omega, double h) {
  return (quat_from_axis_angle(omega * h) * q).normalized();
}

inline Mat3 world_inertia(const Quat& rot, const Vec3& inertia) {
  const Mat3 r = rot.toRotationMatrix();
  return r * inertia.asDiagonal() * r.transpose();
}

/// Angular velocity carrying momentum l at the midpoint of a rotation step
/// of length h, found by fixed-point iteration from the start attitude.
inline Vec3 midpoint_omega(const Quat& rot, const Vec3& inertia, const Vec3& l, double h) {
  Vec3 w = world_inertia(rot, inertia).ldlt().solve(l);
  for (int it = 0; it < 4; ++it) w = world_inertia(integrate_rotation(rot, w, 0.5 * h), inertia).ldlt().solve(l);
  return w;
}

struct Kinematics {
  std::vector<RigidTransform> joints;  // root-relative
  std::vector<Vec3> sites;             // root-relative contact-site positions
};

inline void body_kinematics(const SimModel& m, const VecX& q, Kinematics& k) {
  local_fk(m, q, k.joints);
  k.sites.resize(m.contact_sites.size());
  for (std::size_t i = 0; i < m.contact_sites.size(); ++i)
    k.sites[i] = k.joints[m.contact_sites[i].joint].apply(m.contact_sites[i].offset);
}

}  // namespace detail

/// Generalized joint torques that hold the weld's share of the object
/// weight, per body DoF. Each attached hand carries an equal share along its
/// chain of ancestors. Torques are expressed in each joint's own frame.
inline VecX object_load_torques(const SimModel& m, const SimState& s, const std::vector<RigidTransform>& local) {
  VecX tau = VecX::Zero(m.body_dof());
  if (!s.holding()) return tau;
  int holders = 0;
  for (bool a : s.attached) holders += a ? 1 : 0;
  holders = std::max(holders, 1);
  const RigidTransform root = s.root();
  const Vec3 weight = Vec3(0, 0, -m.params.config.gravity * m.object.mass / holders);
  for (int h = 0; h < 2; ++h) {
    if (!(s.attached[h] || h == s.weld_hand)) continue;
    for (int j : m.skeleton.ancestors(m.skeleton.hand_effectors[h])) {
      if (j < m.first_actuated() || j >= m.end_actuated()) continue;
      const RigidTransform joint = compose(root, local[j]);
      const Vec3 lever = s.object_position - joint.translation;
      tau.segment<3>(SimModel::dof(j, 0)) += joint.rotation.transpose() * lever.cross(weight);
    }
  }
  return tau;
}

/// Decodes an action into RoM-clamped body PD targets.
inline VecX clamp_targets(const SimModel& m, const VecX& action) {
  VecX t(m.body_dof());
  for (int j = m.first_actuated(); j < m.end_actuated(); ++j)
    for (int a = 0; a < 3; ++a) t(SimModel::dof(j, a)) = m.params.rom.clamp(j, a, action(SimModel::dof(j, a)));
  return t;
}

/// Grip commands take effect at control-step boundaries. A hand attaches
/// when gripping within attach_radius of its grasp point; the object is
/// welded to the lowest-index attached hand.
inline void update_attachment(const SimModel& m, SimState& s, const std::array<double, 2>& grip) {
  const SimConfig& c = m.params.config;
  std::vector<RigidTransform> local;
  local_fk(m, s.q, local);
  const RigidTransform root = s.root();
  const RigidTransform object = s.object();
  for (int h = 0; h < 2; ++h) {
    if (!(grip[h] > c.grip_threshold)) {
      s.attached[h] = false;
      continue;
    }
    if (s.attached[h] || !m.grasp_points[h]) continue;
    const Vec3 hand = root.apply(local[m.skeleton.hand_effectors[h]].translation);
    s.attached[h] = (hand - object.apply(*m.grasp_points[h])).norm() <= c.attach_radius;
  }
  if (s.holding() && !s.attached[s.weld_hand]) s.weld_hand = -1;
  if (!s.holding())
    for (int h = 0; h < 2; ++h)
      if (s.attached[h]) {
        weld_to(m, s, h);
        break;
      }
}

/// Advances one control step (control_dt) under a fixed action.
/// Joints: semi-implicit Euler on PD torques. Root and free object:
/// velocity Verlet (kick-drift-kick), exact for ballistic flight.
inline SimState step(const SimModel& m, SimState s, const VecX& action) {
  require(action.size() == m.action_dim(), ErrorKind::kStructural,
          "action has dimension " + std::to_string(action.size()) + ", model expects " +
              std::to_string(m.action_dim()));
  require(action.allFinite(), ErrorKind::kValidation, "non-finite action at step " + std::to_string(s.step));
  const SimConfig& c = m.params.config;
  const PDGains& g = m.params.gains;
  const VecX target = clamp_targets(m, action);
  update_attachment(m, s, {action(m.body_dof()), action(m.body_dof() + 1)});

  const double h = c.substep_dt();
  const int substeps = c.sim_steps_per_control() * c.substeps;
  const Vec3 gravity(0, 0, -c.gravity);
  const double mu = c.ground_friction;

  detail::Kinematics prev, cur;
  detail::body_kinematics(m, s.q, prev);

  for (int sub = 0; sub < substeps; ++sub) {
    // Actuated joints.
    const VecX load = object_load_torques(m, s, prev.joints);
    for (int j = m.first_actuated(); j < m.end_actuated(); ++j) {
      for (int a = 0; a < 3; ++a) {
        const int i = SimModel::dof(j, a);
        const double pd = g.kp[j] * (target(i) - s.q(i)) - g.kd[j] * s.qd(i);
        const double tau = std::clamp(pd, -c.torque_limit_body, c.torque_limit_body) + load(i);
        s.qd(i) += h * tau / g.inertia[j];
        s.q(i) += h * s.qd(i);
      }
    }
    detail::body_kinematics(m, s.q, cur);

    // Root (plus a welded object) under gravity and ground contact.
    const double mass = c.body_mass + (s.holding() ? m.object.mass : 0.0);
    auto body_wrench = [&](const Vec3& x, const Quat& rot, const Vec3& v, const Vec3& w,
                           std::vector<FrictionAnchor>& anchors) {
      detail::Wrench out;
      const Mat3 r = rot.toRotationMatrix();
      out.force = mass * gravity;
      // Torques are taken about the centre of mass of root plus welded
      // object, where gravity has no moment.
      Vec3 com = Vec3::Zero();
      if (s.holding())
        com = (m.object.mass / mass) * r *
              compose(cur.joints[m.skeleton.hand_effectors[s.weld_hand]], s.weld_offset).translation;
      for (std::size_t i = 0; i < cur.sites.size(); ++i) {
        const Vec3 arm = r * cur.sites[i];
        const Vec3 p = x + arm;
        if (p.z() >= 0.0) {
          anchors[i].active = false;
          continue;
        }
        const Vec3 vp = v + w.cross(arm) + r * (cur.sites[i] - prev.sites[i]) / h;
        const Vec3 f = detail::ground_contact(p, vp, c.contact_stiffness, c.contact_damping, c.friction_stiffness,
                                              c.friction_damping, mu, anchors[i]);
        out.force += f;
        out.torque += (arm - com).cross(f);
      }
      return out;
    };

    std::vector<FrictionAnchor> scratch = s.body_anchors;
    const detail::Wrench w0 =
        body_wrench(s.root_position, s.root_rotation, s.root_velocity, s.root_angular_velocity, scratch);
    const Vec3 v_half = s.root_velocity + 0.5 * h * w0.force / mass;
    const Vec3 l_half =
        detail::world_inertia(s.root_rotation, c.body_inertia) * s.root_angular_velocity + 0.5 * h * w0.torque;
    const Vec3 w_half = detail::midpoint_omega(s.root_rotation, c.body_inertia, l_half, h);
    s.root_position += h * v_half;
    s.root_rotation = detail::integrate_rotation(s.root_rotation, w_half, h);
    const detail::Wrench w1 = body_wrench(s.root_position, s.root_rotation, v_half, w_half, s.body_anchors);
    s.root_velocity = v_half + 0.5 * h * w1.force / mass;
    s.root_angular_velocity =
        detail::world_inertia(s.root_rotation, c.body_inertia).ldlt().solve(l_half + 0.5 * h * w1.torque);

    // Object: rigidly follows the weld hand, or flies freely.
    if (s.holding()) {
      const RigidTransform obj = compose(compose(s.root(), cur.joints[m.skeleton.hand_effectors[s.weld_hand]]),
                                         s.weld_offset);
      const Quat rot = obj.quaternion();
      s.object_velocity = (obj.translation - s.object_position) / h;
      s.object_angular_velocity = axis_angle_from_quat(rot * s.object_rotation.conjugate()) / h;
      s.object_position = obj.translation;
      s.object_rotation = rot;
      for (auto& a : s.object_anchors) a.active = false;
    } else {
      const double om = m.object.mass;
      const double kn = c.object_contact_stiffness * om, cn = c.object_contact_damping * om;
      const double kt = kn * c.friction_stiffness / c.contact_stiffness;
      const double ct = cn * c.friction_damping / c.contact_damping;
      auto object_wrench = [&](const Vec3& x, const Quat& rot, const Vec3& v, const Vec3& w,
                               std::vector<FrictionAnchor>& anchors) {
        detail::Wrench out;
        out.force = om * gravity;
        const Mat3 r = rot.toRotationMatrix();
        for (std::size_t i = 0; i < m.object.vertices.size(); ++i) {
          const Vec3 arm = r * m.object.vertices[i];
          const Vec3 p = x + arm;
          if (p.z() >= 0.0) {
            anchors[i].active = false;
            continue;
          }
          const Vec3 f = detail::ground_contact(p, v + w.cross(arm), kn, cn, kt, ct, mu, anchors[i]);
          out.force += f;
          out.torque += arm.cross(f);
        }
        return out;
      };
      std::vector<FrictionAnchor> oscratch = s.object_anchors;
      const detail::Wrench o0 =
          object_wrench(s.object_position, s.object_rotation, s.object_velocity, s.object_angular_velocity, oscratch);
      const Vec3 ov_half = s.object_velocity + 0.5 * h * o0.force / om;
      const Vec3 ol_half =
          detail::world_inertia(s.object_rotation, m.object.inertia) * s.object_angular_velocity + 0.5 * h * o0.torque;
      const Vec3 ow_half = detail::midpoint_omega(s.object_rotation, m.object.inertia, ol_half, h);
      s.object_position += h * ov_half;
      s.object_rotation = detail::integrate_rotation(s.object_rotation, ow_half, h);
      const detail::Wrench o1 = object_wrench(s.object_position, s.object_rotation, ov_half, ow_half, s.object_anchors);
      s.object_velocity = ov_half + 0.5 * h * o1.force / om;
      s.object_angular_velocity =
          detail::world_inertia(s.object_rotation, m.object.inertia).ldlt().solve(ol_half + 0.5 * h * o1.torque);
    }
    std::swap(prev, cur);
  }

  ++s.step;
  if (!s.all_finite())
    throw Error(ErrorKind::kSimulationDiverged, "simulation diverged at step " + std::to_string(s.step));
  return s;
}

}  // namespace dynhoi::sim
