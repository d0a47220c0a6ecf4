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

#include "dynhoi/composer/train.hpp"
#include "dynhoi/sim/rollout.hpp"

namespace dynhoi::sim {

/// Compact composer input built by the harness:
///   pelvis height error, pelvis vertical speed, reference vertical speed,
///   pelvis tilt (x, y of the body up axis), object position error (3),
///   attach flags (2), reference contact flags (2),
///   mean |a_IM - a_PHC| over leg DoFs and over the remaining body DoFs.
inline constexpr int kComposerFeatureDim = 14;

inline composer::FeatureFn make_feature_fn(std::shared_ptr<const SimModel> model) {
  const VecX legs = dof_mask(*model, leg_joints(model->skeleton));
  return [model, legs](const VecX& o, const VecX& g, const VecX& a_phc, const VecX& a_im) {
    const Layout l(model->body_dof());
    VecX f(kComposerFeatureDim);
    const Quat root = detail::get_quat(o, l.root_quat());
    const Vec3 up = root * Vec3::UnitZ();
    const VecX diff = (a_im.head(a_phc.size()) - a_phc).cwiseAbs();
    const double n_legs = std::max(legs.sum(), 1.0);
    const double n_rest = std::max(static_cast<double>(legs.size()) - legs.sum(), 1.0);
    f << o(l.root_pos() + 2) - g(l.goal_root_pos() + 2), o(l.root_vel() + 2), g(l.goal_root_vel() + 2), up.x(),
        up.y(), o.segment<3>(l.obj_pos()) - g.segment<3>(l.goal_obj_pos()), o(l.attached()), o(l.attached() + 1),
        g(l.goal_contacts()), g(l.goal_contacts() + 1), diff.dot(legs) / n_legs,
        diff.dot(VecX::Ones(legs.size()) - legs) / n_rest;
    return f;
  };
}

/// A reference clip bound to its simulation model, scripted experts and
/// composer features.
struct Task {
  HOIReference reference;
  std::shared_ptr<const SimModel> model;
  ExpertPair experts;
  composer::FeatureFn features;

  static Task make(const HOIReference& reference, const SimParams& params) {
    Task t;
    t.reference = reference;
    t.model = std::make_shared<const SimModel>(make_model(reference, params));
    t.experts = make_scripted_experts(t.model);
    t.features = make_feature_fn(t.model);
    return t;
  }

  composer::ComposerParams make_params(const std::vector<int>& hidden, std::uint64_t seed = 0) const {
    auto p = composer::ComposerParams::make(kComposerFeatureDim, model->body_dof(), hidden);
    if (seed != 0) p.net.randomize(seed, 0.1);
    return p;
  }

  composer::BlendPolicy make_policy(composer::BlendMode mode, const composer::ComposerParams& params) const {
    composer::PolicyOptions opt;
    opt.params = params;
    opt.features = features;
    opt.arm_mask = arm_mask(*model);
    return composer::BlendPolicy(mode, *experts.dyn, *experts.hoi, std::move(opt));
  }

  RolloutResult run(composer::BlendMode mode, const composer::ComposerParams& params, std::uint64_t seed) const {
    composer::BlendPolicy policy = make_policy(mode, params);
    return rollout(*model, reference, [&policy](const VecX& o, const VecX& g, int n) { return policy.act(o, g, n); },
                   seed);
  }

  composer::ComposerReturnFn episode_return(composer::BlendMode mode) const {
    return [this, mode](const composer::ComposerParams& p, std::uint64_t seed) { return run(mode, p, seed).total_reward(); };
  }
};

}  // namespace dynhoi::sim
