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

#include <functional>
#include <string>

#include "dynhoi/composer/policies.hpp"
#include "dynhoi/sim/experts.hpp"
#include "dynhoi/sim/reward.hpp"

namespace dynhoi::sim {

enum class Termination { kCompleted, kFall, kDrop };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::kCompleted: return "completed";
    case Termination::kFall: return "fall";
    case Termination::kDrop: return "drop";
  }
  return "unknown";
}

struct BlendLogRow {
  int step = 0;
  double w_mean = 0.0, w_min = 0.0, w_max = 0.0;
  double r_norm = 0.0, mu_norm = 0.0;
  int chosen_expert = -1;
};

struct RolloutResult {
  HOIReference trajectory;  // executed motion; contacts are the attach flags
  std::vector<double> rewards;
  std::vector<BlendLogRow> blend_log;
  Termination reason = Termination::kCompleted;

  int steps() const { return static_cast<int>(rewards.size()); }
  double total_reward() const {
    double s = 0.0;
    for (double r : rewards) s += r;
    return s;
  }
};

using PolicyFn = std::function<composer::PolicyStep(const VecX& observation, const VecX& goal, int step)>;

inline void record_frame(const SimModel& m, const SimState& s, RolloutResult& out) {
  out.trajectory.human.frames.push_back(s.pose(m.skeleton));
  out.trajectory.object.poses.push_back({s.object_position, s.object_rotation});
  out.trajectory.contacts.frames.push_back(s.attached);
}

/// Runs up to min(episode_length, reference length - 1) control steps,
/// stopping early on a fall (pelvis below fall_height) or a drop (object
/// farther than drop_distance from its reference position).
inline RolloutResult rollout(const SimModel& m, const HOIReference& reference, const PolicyFn& policy,
                             std::uint64_t seed) {
  reference.validate();
  const SimConfig& c = m.params.config;
  require(std::abs(reference.human.fps * c.control_dt - 1.0) < 1e-9, ErrorKind::kConfiguration,
          "reference fps must match the control rate");
  RolloutResult out;
  out.trajectory.human.skeleton = m.skeleton;
  out.trajectory.human.fps = reference.human.fps;
  out.trajectory.object.fps = reference.object.fps;
  out.trajectory.object_vertices = reference.object_vertices;

  SimState s = initial_state(m, reference, seed);
  record_frame(m, s, out);
  const int steps = std::min(c.episode_length, reference.size() - 1);
  for (int n = 0; n < steps; ++n) {
    const composer::PolicyStep act = policy(encode_observation(m, s), encode_goal(m, reference, n), n);
    s = step(m, s, act.action);
    record_frame(m, s, out);
    out.rewards.push_back(imitation_reward(m, s, reference, n + 1).total());

    BlendLogRow row;
    row.step = n;
    if (act.w.size() > 0) {
      row.w_mean = act.w.mean();
      row.w_min = act.w.minCoeff();
      row.w_max = act.w.maxCoeff();
    }
    row.r_norm = act.r_norm;
    row.mu_norm = act.mu_norm;
    row.chosen_expert = act.chosen_expert;
    out.blend_log.push_back(row);

    if (s.root_position.z() < c.fall_height) {
      out.reason = Termination::kFall;
      break;
    }
    if ((s.object_position - reference.object.poses[n + 1].position).norm() > c.drop_distance) {
      out.reason = Termination::kDrop;
      break;
    }
  }
  return out;
}

}  // namespace dynhoi::sim
