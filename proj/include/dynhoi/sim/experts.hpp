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

#include <memory>
#include <utility>

#include "dynhoi/composer/composer.hpp"
#include "dynhoi/sim/observation.hpp"
#include "dynhoi/sim/physics.hpp"

namespace dynhoi::sim {

/// Body joints below the pelvis: every foot joint and its ancestors.
inline std::vector<int> leg_joints(const SkeletonSpec& sk) {
  std::vector<int> legs;
  for (int f : sk.foot_joints) {
    legs.push_back(f);
    for (int a : sk.ancestors(f))
      if (a != sk.pelvis_joint) legs.push_back(a);
  }
  std::sort(legs.begin(), legs.end());
  legs.erase(std::unique(legs.begin(), legs.end()), legs.end());
  return legs;
}

/// 1 on body DoFs of the given joints, 0 elsewhere.
inline VecX dof_mask(const SimModel& m, const std::vector<int>& joints) {
  VecX mask = VecX::Zero(m.body_dof());
  for (int j : joints)
    if (j >= m.first_actuated() && j < m.end_actuated()) mask.segment<3>(SimModel::dof(j, 0)).setOnes();
  return mask;
}

inline VecX arm_mask(const SimModel& m) { return dof_mask(m, named_joint_set(m.skeleton, "arms")); }

/// Root attitude feedback of the dynamic tracker: radians of ankle target
/// per radian of pelvis tilt error, and per rad/s of tilt rate. Tilting the
/// soles moves the centre of pressure under the body.
struct BalanceGains {
  double kp = 3.0;
  double kd = 0.3;
};

/// Whole-body dynamic tracker: reference targets with velocity feedforward
/// on every body joint, an ankle correction that steers the pelvis attitude
/// toward the reference, and no grip output.
class DynamicExpert final : public composer::Expert {
 public:
  explicit DynamicExpert(std::shared_ptr<const SimModel> model, BalanceGains balance = {})
      : m_(std::move(model)), layout_(m_->body_dof()), balance_(balance), ankles_(m_->skeleton.foot_joints) {}

  VecX act(const VecX& observation, const VecX& goal) const override {
    require(observation.size() == layout_.observation_dim() && goal.size() == layout_.goal_dim(),
            ErrorKind::kStructural, "dynamic expert got inputs of the wrong size");
    VecX a(m_->body_dof());
    const PDGains& g = m_->params.gains;
    for (int j = m_->first_actuated(); j < m_->end_actuated(); ++j) {
      const double lead = g.kp[j] > 0.0 ? g.kd[j] / g.kp[j] : 0.0;
      for (int k = 0; k < 3; ++k) {
        const int i = SimModel::dof(j, k);
        a(i) = goal(layout_.goal_q() + i) + lead * goal(layout_.goal_qd() + i);
      }
    }
    // Pelvis-frame tilt error; yaw is left to the reference.
    const Quat root = detail::get_quat(observation, layout_.root_quat());
    const Quat want = detail::get_quat(goal, layout_.goal_root_quat());
    Vec3 err = root.conjugate() * axis_angle_from_quat(want * root.conjugate());
    Vec3 rate = root.conjugate() * observation.segment<3>(layout_.root_omega());
    err.z() = 0.0;
    rate.z() = 0.0;
    const Vec3 correction = balance_.kp * err - balance_.kd * rate;
    for (int j : ankles_) a.segment<3>(SimModel::dof(j, 0)) -= correction;
    return a;
  }
  int action_dim() const override { return m_->body_dof(); }
  composer::Coverage coverage() const override { return composer::Coverage::kBodyOnly; }

 private:
  std::shared_ptr<const SimModel> m_;
  Layout layout_;
  BalanceGains balance_;
  std::vector<int> ankles_;
};

/// Contact-aware tracker: grips whenever the reference is in contact and
/// offsets upper-body targets to carry the object's weight, but follows the
/// legs lazily (a first-order pull of `lazy_gain` toward the reference).
class InteractionExpert final : public composer::Expert {
 public:
  InteractionExpert(std::shared_ptr<const SimModel> model, double lazy_gain = 0.25)
      : m_(std::move(model)), layout_(m_->body_dof()), lazy_gain_(lazy_gain),
        legs_(dof_mask(*m_, leg_joints(m_->skeleton))) {}

  VecX act(const VecX& observation, const VecX& goal) const override {
    require(observation.size() == layout_.observation_dim() && goal.size() == layout_.goal_dim(),
            ErrorKind::kStructural, "interaction expert got inputs of the wrong size");
    const SimModel& m = *m_;
    const SimState s = decode_observation(m, observation);
    std::vector<RigidTransform> local;
    local_fk(m, s.q, local);
    const VecX load = object_load_torques(m, s, local);
    const PDGains& g = m.params.gains;

    VecX a(m.action_dim());
    for (int j = m.first_actuated(); j < m.end_actuated(); ++j) {
      const double lead = g.kp[j] > 0.0 ? g.kd[j] / g.kp[j] : 0.0;
      for (int k = 0; k < 3; ++k) {
        const int i = SimModel::dof(j, k);
        const double ref = goal(layout_.goal_q() + i);
        if (legs_(i) > 0.0)
          a(i) = s.q(i) + lazy_gain_ * (ref - s.q(i));
        else
          a(i) = ref + lead * goal(layout_.goal_qd() + i) - (g.kp[j] > 0.0 ? load(i) / g.kp[j] : 0.0);
      }
    }
    a(m.body_dof()) = goal(layout_.goal_contacts());
    a(m.body_dof() + 1) = goal(layout_.goal_contacts() + 1);
    return a;
  }
  int action_dim() const override { return m_->action_dim(); }
  composer::Coverage coverage() const override { return composer::Coverage::kFull; }

 private:
  std::shared_ptr<const SimModel> m_;
  Layout layout_;
  double lazy_gain_;
  VecX legs_;
};

struct ExpertPair {
  std::shared_ptr<const DynamicExpert> dyn;
  std::shared_ptr<const InteractionExpert> hoi;
};

inline ExpertPair make_scripted_experts(std::shared_ptr<const SimModel> model) {
  return {std::make_shared<DynamicExpert>(model), std::make_shared<InteractionExpert>(model)};
}

}  // namespace dynhoi::sim
