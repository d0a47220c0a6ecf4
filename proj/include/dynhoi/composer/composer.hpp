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

#include "dynhoi/composer/mlp.hpp"

namespace dynhoi::composer {

enum class Coverage { kBodyOnly, kFull };

/// Frozen imitation policy. Implementations must be deterministic and must
/// not change observable state from act().
class Expert {
 public:
  virtual ~Expert() = default;
  virtual VecX act(const VecX& observation, const VecX& goal) const = 0;
  virtual int action_dim() const = 0;
  virtual Coverage coverage() const = 0;
};

/// Builds the composer network input. The default concatenates observation,
/// goal and both expert actions.
using FeatureFn = std::function<VecX(const VecX& observation, const VecX& goal, const VecX& a_phc, const VecX& a_im)>;

inline VecX concat_features(const VecX& observation, const VecX& goal, const VecX& a_phc, const VecX& a_im) {
  VecX x(observation.size() + goal.size() + a_phc.size() + a_im.size());
  x << observation, goal, a_phc, a_im;
  return x;
}

struct ExpertActions {
  VecX phc;  // body only
  VecX im;   // full
};

inline ExpertActions query_experts(const Expert& phc, const Expert& im, const VecX& observation, const VecX& goal,
                                   int step) {
  ExpertActions a;
  try {
    a.phc = phc.act(observation, goal);
    a.im = im.act(observation, goal);
  } catch (const Error& e) {
    throw Error(e.kind(), "expert failed at step " + std::to_string(step) + ": " + e.what());
  }
  require(a.phc.size() == phc.action_dim() && a.im.size() == im.action_dim(), ErrorKind::kStructural,
          "expert returned an action of undeclared size at step " + std::to_string(step));
  require(a.im.size() >= a.phc.size(), ErrorKind::kStructural, "IM expert must cover at least the body");
  return a;
}

struct StepResult {
  VecX action;
  ComposerOutput output;
  EigenBasis basis;
};

/// One control step: query experts, push the body delta, refresh the basis,
/// evaluate the heads and blend.
inline StepResult composer_step(const ComposerParams& params, const Expert& phc, const Expert& im,
                                const VecX& observation, const VecX& goal, DeltaBuffer& buffer, int step = 0,
                                const FeatureFn& features = concat_features) {
  const ExpertActions a = query_experts(phc, im, observation, goal, step);
  require(a.phc.size() == params.body_dim, ErrorKind::kStructural, "PHC action does not match the composer body dim");
  buffer.push(a.im.head(params.body_dim) - a.phc);
  StepResult res;
  res.basis = update_basis(buffer, params.subspace_dim);
  const ComposerOutput heads = composer_forward(params, features(observation, goal, a.phc, a.im), res.basis);
  res.output = blend(a.phc, a.im, heads.w, heads.r, heads.mu, res.basis);
  res.action = res.output.action;
  return res;
}

}  // namespace dynhoi::composer
