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

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include "dynhoi/composer/composer.hpp"

namespace dynhoi::composer {

enum class BlendMode {
  kMlpPca,
  kMlp,
  kHardMoe,
  kHardMoeJoint,
  kHeuristicHand,
  kHeuristicArm,
  kResidual,
  kExpertPhc,
  kExpertIm,
  kScratch,
};

inline constexpr std::array<std::pair<BlendMode, std::string_view>, 10> kBlendModeNames{{
    {BlendMode::kMlpPca, "mlp_pca"},
    {BlendMode::kMlp, "mlp"},
    {BlendMode::kHardMoe, "hard_moe"},
    {BlendMode::kHardMoeJoint, "hard_moe_joint"},
    {BlendMode::kHeuristicHand, "heuristic_hand"},
    {BlendMode::kHeuristicArm, "heuristic_arm"},
    {BlendMode::kResidual, "residual"},
    {BlendMode::kExpertPhc, "expert_phc"},
    {BlendMode::kExpertIm, "expert_im"},
    {BlendMode::kScratch, "scratch"},
}};

inline std::string to_string(BlendMode m) {
  for (const auto& [mode, name] : kBlendModeNames)
    if (mode == m) return std::string(name);
  return "unknown";
}

inline BlendMode parse_blend_mode(std::string_view name) {
  for (const auto& [mode, n] : kBlendModeNames)
    if (n == name) return mode;
  throw Error(ErrorKind::kValidation, "unknown blend mode '" + std::string(name) + "'");
}

/// Modes whose behavior depends on trained composer parameters.
inline bool is_learned(BlendMode m) {
  return m == BlendMode::kMlpPca || m == BlendMode::kMlp || m == BlendMode::kHardMoe ||
         m == BlendMode::kHardMoeJoint || m == BlendMode::kResidual || m == BlendMode::kScratch;
}

struct PolicyStep {
  VecX action;
  VecX w;                 // effective per-DoF interpolation weight (empty for expert-only modes)
  double r_norm = 0.0;
  double mu_norm = 0.0;
  int chosen_expert = -1; // 0 = PHC, 1 = IM, -1 = not a hard choice
};

struct PolicyOptions {
  ComposerParams params;   // required by learned modes
  FeatureFn features = concat_features;
  VecX arm_mask;           // 1 on arm body DoFs, used by heuristic_arm
  int buffer_capacity = kDefaultBufferCapacity;
};

/// A blending strategy bound to one expert pair. Holds the per-episode Δa
/// buffer, so use one instance per rollout and reset() between episodes.
class BlendPolicy {
 public:
  BlendPolicy(BlendMode mode, const Expert& phc, const Expert& im, PolicyOptions options)
      : mode_(mode), phc_(phc), im_(im), opt_(std::move(options)),
        buffer_(phc.action_dim(), opt_.buffer_capacity) {
    require(phc.coverage() == Coverage::kBodyOnly && im.coverage() == Coverage::kFull, ErrorKind::kConfiguration,
            "expected a body-only PHC expert and a full-coverage IM expert");
    require(im.action_dim() >= phc.action_dim(), ErrorKind::kConfiguration, "IM must cover the PHC body DoFs");
    if (is_learned(mode_)) {
      opt_.params.validate();
      require(opt_.params.body_dim == phc.action_dim(), ErrorKind::kConfiguration,
              "composer body dimension does not match the experts");
    }
    if (mode_ == BlendMode::kHeuristicArm)
      require(opt_.arm_mask.size() == phc.action_dim(), ErrorKind::kConfiguration, "arm mask has the wrong size");
  }

  BlendMode mode() const { return mode_; }
  int action_dim() const { return im_.action_dim(); }
  int body_dim() const { return phc_.action_dim(); }
  void reset() { buffer_.clear(); }
  const DeltaBuffer& buffer() const { return buffer_; }

  PolicyStep act(const VecX& observation, const VecX& goal, int step) {
    const ExpertActions a = query_experts(phc_, im_, observation, goal, step);
    const int d = body_dim();
    const int d_hand = action_dim() - d;
    PolicyStep out;

    switch (mode_) {
      case BlendMode::kExpertPhc:
        out.action = phc_only(a);
        out.chosen_expert = 0;
        return out;
      case BlendMode::kExpertIm:
        out.action = a.im;
        out.chosen_expert = 1;
        return out;
      case BlendMode::kHeuristicHand:
        return fixed_weights(a, VecX::Zero(d));
      case BlendMode::kHeuristicArm:
        return fixed_weights(a, opt_.arm_mask);
      default:
        break;
    }

    buffer_.push(a.im.head(d) - a.phc);
    const EigenBasis basis = update_basis(buffer_, opt_.params.subspace_dim);
    const VecX features = opt_.features(observation, goal, a.phc, a.im);
    const VecX head = opt_.params.net.forward(features);
    ComposerOutput h = heads_to_output(head, opt_.params);

    switch (mode_) {
      case BlendMode::kMlpPca:
        break;
      case BlendMode::kMlp:
        h.mu.setZero();
        break;
      case BlendMode::kHardMoe: {
        const bool im = h.w.mean() >= 0.5;
        out.action = im ? a.im : phc_only(a);
        out.w = VecX::Constant(d, im ? 1.0 : 0.0);
        out.chosen_expert = im ? 1 : 0;
        return out;
      }
      case BlendMode::kHardMoeJoint:
        h.w = h.w.unaryExpr([](double v) { return v >= 0.5 ? 1.0 : 0.0; });
        h.r.setZero();
        h.mu.setZero();
        break;
      case BlendMode::kResidual:
        // IM is the base policy; the residual head adds a bounded correction.
        h.w.setOnes();
        h.mu.setZero();
        break;
      case BlendMode::kScratch: {
        out.action.resize(action_dim());
        out.action.head(d) = kPi * head.head(d).array().tanh().matrix();
        for (int i = 0; i < d_hand; ++i) out.action(d + i) = sigmoid(head(d + (i % d)));
        return out;
      }
      default:
        break;
    }

    if (mode_ == BlendMode::kResidual) {
      out.action = a.im;
      out.action.head(d) += h.r;
      out.w = h.w;
      out.r_norm = h.r.norm();
      return out;
    }
    const ComposerOutput blended = blend(a.phc, a.im, h.w, h.r, h.mu, basis);
    out.action = blended.action;
    out.w = blended.w;
    out.r_norm = blended.r.norm();
    out.mu_norm = blended.mu.norm();
    return out;
  }

 private:
  VecX phc_only(const ExpertActions& a) const {
    VecX act = VecX::Zero(action_dim());
    act.head(body_dim()) = a.phc;
    return act;
  }

  PolicyStep fixed_weights(const ExpertActions& a, const VecX& w) const {
    const int d = body_dim();
    const EigenBasis none = EigenBasis::zero(d, 0);
    PolicyStep out;
    out.action = blend(a.phc, a.im, w, VecX::Zero(d), VecX(), none).action;
    out.w = w;
    return out;
  }

  BlendMode mode_;
  const Expert& phc_;
  const Expert& im_;
  PolicyOptions opt_;
  DeltaBuffer buffer_;
};

}  // namespace dynhoi::composer
