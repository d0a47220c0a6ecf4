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
#include <cstdint>
#include <random>
#include <vector>

#include "dynhoi/core/motion.hpp"
#include "dynhoi/planner/denoiser.hpp"

namespace dynhoi::planner {

inline constexpr double kDefaultOnsetDelay = 1.5;  // seconds after first contact

/// First frame with any hand contact, pushed back by delay_s and clamped to
/// the last frame.
inline int detect_onset(const ContactMask& contacts, double fps, double delay_s = kDefaultOnsetDelay) {
  require(contacts.size() > 0, ErrorKind::kValidation, "empty contact mask");
  require(fps > 0.0, ErrorKind::kValidation, "fps must be positive");
  require(delay_s >= 0.0, ErrorKind::kValidation, "onset delay must be non-negative");
  for (int n = 0; n < contacts.size(); ++n) {
    if (contacts.any(n)) {
      const long onset = n + std::lround(delay_s * fps);
      return static_cast<int>(std::min<long>(onset, contacts.size() - 1));
    }
  }
  throw Error(ErrorKind::kNoInteraction, "contact mask never reports hand contact");
}

struct InpaintingPlan {
  HOIReference reference;
  int onset_frame = 0;
  std::vector<int> interaction_joints;
  double onset_delay_s = kDefaultOnsetDelay;

  int length() const { return reference.size(); }

  // onset_frame == length() is accepted and means "impute everything".
  void validate() const {
    require(onset_frame >= 0 && onset_frame <= length(), ErrorKind::kValidation, "onset frame out of range");
    for (int j : interaction_joints)
      require(j >= 0 && j < reference.human.skeleton.joint_count(), ErrorKind::kValidation,
              "interaction joint out of range");
  }
};

inline InpaintingPlan make_plan(const HOIReference& reference, double onset_delay_s = kDefaultOnsetDelay) {
  InpaintingPlan plan;
  plan.reference = reference;
  plan.onset_delay_s = onset_delay_s;
  plan.onset_frame = detect_onset(reference.contacts, reference.human.fps, onset_delay_s);
  plan.interaction_joints = reference.human.skeleton.interaction_joints;
  return plan;
}

/// Interaction-consistent imputation of reference joint rotations:
///   n <  onset            -> reference pose at n (root included)
///   n >= onset, j in J_int -> reference rotation frozen at the onset frame
///   n >= onset, otherwise  -> denoised rotation (root from the denoiser too)
inline std::vector<PoseFrame> inpaint_pose(const std::vector<PoseFrame>& denoised, const InpaintingPlan& plan) {
  const auto& ref = plan.reference.human.frames;
  require(denoised.size() == ref.size(), ErrorKind::kStructural,
          "denoised motion has " + std::to_string(denoised.size()) + " frames, reference has " +
              std::to_string(ref.size()));
  plan.validate();
  const int n_frames = static_cast<int>(ref.size());
  const int nj = plan.reference.human.skeleton.joint_count();
  std::vector<char> frozen(nj, 0);
  for (int j : plan.interaction_joints) frozen[j] = 1;

  std::vector<PoseFrame> out(denoised.size());
  for (int n = 0; n < n_frames; ++n) {
    require(static_cast<int>(denoised[n].joint_rotations.size()) == nj, ErrorKind::kStructural,
            "denoised frame " + std::to_string(n) + " has the wrong joint count");
    if (n < plan.onset_frame) {
      out[n] = ref[n];
      continue;
    }
    out[n] = denoised[n];
    const PoseFrame& at_onset = ref[plan.onset_frame];
    for (int j = 0; j < nj; ++j)
      if (frozen[j]) out[n].joint_rotations[j] = at_onset.joint_rotations[j];
  }
  return out;
}

struct SamplingOptions {
  std::uint64_t seed = 0;
  double init_scale = 1.0;  // std of the pure-noise initial tensor
};

/// Denoise-then-impute loop over k = K..1. The constraints are re-imposed
/// after every step, so the returned clip satisfies them exactly.
inline MotionClip sample_with_inpainting(const Denoiser& denoiser, const InpaintingPlan& plan,
                                         const Condition& condition, SamplingOptions options = {}) {
  plan.validate();
  const int K = denoiser.schedule_length();
  require(K >= 1, ErrorKind::kConfiguration, "denoiser schedule length must be at least 1");
  const MotionClip& ref = plan.reference.human;
  const int nj = ref.skeleton.joint_count();

  MatX x(ref.size(), motion_feature_dim(nj));
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, options.init_scale);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);

  std::vector<PoseFrame> frames;
  for (int k = K; k >= 1; --k) {
    MatX denoised = denoiser.step(x, condition, k);
    require(denoised.rows() == x.rows() && denoised.cols() == x.cols(), ErrorKind::kIntegration,
            "denoiser changed the tensor shape at step " + std::to_string(k));
    require(denoised.allFinite(), ErrorKind::kIntegration, "denoiser produced non-finite values at step " +
                                                               std::to_string(k));
    frames = inpaint_pose(frames_from_tensor(denoised, nj), plan);
    if (k > 1) x = tensor_from_frames(frames);
  }
  MotionClip out;
  out.skeleton = ref.skeleton;
  out.fps = ref.fps;
  out.frames = std::move(frames);
  return out;
}

}  // namespace dynhoi::planner
