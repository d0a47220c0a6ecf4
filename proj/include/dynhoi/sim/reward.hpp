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

#include "dynhoi/sim/model.hpp"

namespace dynhoi::sim {

struct RewardTerms {
  double joint = 0.0;
  double object = 0.0;
  double contact = 0.0;
  double total() const { return joint + object + contact; }
};

/// r = w_j exp(-a_j mean_j |p_j - p_j*|^2) + w_o exp(-a_o |o - o*|^2) + bonus,
/// where the bonus is paid when every hand the goal has in contact is
/// attached.
inline RewardTerms imitation_reward(const SimModel& m, const SimState& s, const HOIReference& goal, int n) {
  require(n >= 0 && n < goal.size(), ErrorKind::kValidation, "goal frame " + std::to_string(n) + " out of range");
  const RewardWeights& w = m.params.reward;
  const auto& sk = m.skeleton;
  const auto sim_pos = joint_positions(sk, s.pose(sk));
  const auto ref_pos = joint_positions(sk, goal.human.frames[n]);
  double err = 0.0;
  for (int j = 0; j < sk.body_joint_count; ++j) err += (sim_pos[j] - ref_pos[j]).squaredNorm();
  err /= sk.body_joint_count;
  const double obj_err = (s.object_position - goal.object.poses[n].position).squaredNorm();
  bool held = true;
  for (int h = 0; h < 2; ++h)
    if (goal.contacts.frames[n][h] && !s.attached[h]) held = false;
  return {w.joint_weight * std::exp(-w.joint_scale * err), w.object_weight * std::exp(-w.object_scale * obj_err),
          held ? w.contact_bonus : 0.0};
}

}  // namespace dynhoi::sim
