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

#include "dynhoi/sim/model.hpp"

namespace dynhoi::sim {

/// Flat layouts of the state observation and the goal vector handed to
/// experts and composers.
///
/// observation: root_pos(3) root_quat_wxyz(4) root_vel(3) root_omega(3)
///              q(D) qd(D) obj_pos(3) obj_quat_wxyz(4) obj_vel(3) attached(2)
/// goal (reference frame n+1): root_pos(3) root_quat_wxyz(4) root_vel(3)
///              q(D) qd(D) obj_pos(3) obj_quat_wxyz(4) contacts(2)
struct Layout {
  int d = 0;  // body DoF

  explicit Layout(int body_dof) : d(body_dof) {}

  int root_pos() const { return 0; }
  int root_quat() const { return 3; }
  int root_vel() const { return 7; }
  int root_omega() const { return 10; }
  int q() const { return 13; }
  int qd() const { return 13 + d; }
  int obj_pos() const { return 13 + 2 * d; }
  int obj_quat() const { return obj_pos() + 3; }
  int obj_vel() const { return obj_pos() + 7; }
  int attached() const { return obj_pos() + 10; }
  int observation_dim() const { return attached() + 2; }

  int goal_root_pos() const { return 0; }
  int goal_root_quat() const { return 3; }
  int goal_root_vel() const { return 7; }
  int goal_q() const { return 10; }
  int goal_qd() const { return 10 + d; }
  int goal_obj_pos() const { return 10 + 2 * d; }
  int goal_obj_quat() const { return goal_obj_pos() + 3; }
  int goal_contacts() const { return goal_obj_pos() + 7; }
  int goal_dim() const { return goal_contacts() + 2; }
};

namespace detail {
inline void put_quat(VecX& v, int at, const Quat& q) { v.segment<4>(at) << q.w(), q.x(), q.y(), q.z(); }
inline Quat get_quat(const VecX& v, int at) { return Quat(v(at), v(at + 1), v(at + 2), v(at + 3)).normalized(); }
}  // namespace detail

inline VecX encode_observation(const SimModel& m, const SimState& s) {
  const Layout l(m.body_dof());
  VecX o(l.observation_dim());
  o.segment<3>(l.root_pos()) = s.root_position;
  detail::put_quat(o, l.root_quat(), s.root_rotation);
  o.segment<3>(l.root_vel()) = s.root_velocity;
  o.segment<3>(l.root_omega()) = s.root_angular_velocity;
  o.segment(l.q(), l.d) = s.q;
  o.segment(l.qd(), l.d) = s.qd;
  o.segment<3>(l.obj_pos()) = s.object_position;
  detail::put_quat(o, l.obj_quat(), s.object_rotation);
  o.segment<3>(l.obj_vel()) = s.object_velocity;
  o(l.attached()) = s.attached[0] ? 1.0 : 0.0;
  o(l.attached() + 1) = s.attached[1] ? 1.0 : 0.0;
  return o;
}

/// Goal for the step that advances frame n to n+1: the target frame n+1 with
/// finite-difference velocities over [n, n+1].
inline VecX encode_goal(const SimModel& m, const HOIReference& ref, int n) {
  const Layout l(m.body_dof());
  const int last = ref.size() - 1;
  const int a = std::clamp(n, 0, last), b = std::clamp(n + 1, 0, last);
  const PoseFrame& fa = ref.human.frames[a];
  const PoseFrame& fb = ref.human.frames[b];
  const double inv_dt = a == b ? 0.0 : ref.human.fps;
  VecX g(l.goal_dim());
  g.segment<3>(l.goal_root_pos()) = fb.root_position;
  detail::put_quat(g, l.goal_root_quat(), fb.root_rotation);
  g.segment<3>(l.goal_root_vel()) = (fb.root_position - fa.root_position) * inv_dt;
  for (int j = m.first_actuated(); j < m.end_actuated(); ++j) {
    g.segment<3>(l.goal_q() + SimModel::dof(j, 0)) = fb.joint_rotations[j];
    g.segment<3>(l.goal_qd() + SimModel::dof(j, 0)) = (fb.joint_rotations[j] - fa.joint_rotations[j]) * inv_dt;
  }
  g.segment<3>(l.goal_obj_pos()) = ref.object.poses[b].position;
  detail::put_quat(g, l.goal_obj_quat(), ref.object.poses[b].rotation);
  g(l.goal_contacts()) = ref.contacts.frames[b][0] ? 1.0 : 0.0;
  g(l.goal_contacts() + 1) = ref.contacts.frames[b][1] ? 1.0 : 0.0;
  return g;
}

/// Rebuilds the parts of a state that experts need from an observation.
inline SimState decode_observation(const SimModel& m, const VecX& o) {
  const Layout l(m.body_dof());
  require(o.size() == l.observation_dim(), ErrorKind::kStructural, "observation has the wrong dimension");
  SimState s;
  s.root_position = o.segment<3>(l.root_pos());
  s.root_rotation = detail::get_quat(o, l.root_quat());
  s.root_velocity = o.segment<3>(l.root_vel());
  s.root_angular_velocity = o.segment<3>(l.root_omega());
  s.q = o.segment(l.q(), l.d);
  s.qd = o.segment(l.qd(), l.d);
  s.object_position = o.segment<3>(l.obj_pos());
  s.object_rotation = detail::get_quat(o, l.obj_quat());
  s.object_velocity = o.segment<3>(l.obj_vel());
  s.attached = {o(l.attached()) > 0.5, o(l.attached() + 1) > 0.5};
  for (int h = 0; h < 2; ++h)
    if (s.attached[h] && s.weld_hand < 0) s.weld_hand = h;
  return s;
}

}  // namespace dynhoi::sim
