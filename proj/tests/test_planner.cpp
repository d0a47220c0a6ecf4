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

#include <random>

#include <gtest/gtest.h>

#include "dynhoi/planner/inpainting.hpp"
#include "test_util.hpp"

namespace dynhoi::planner {
namespace {

using dynhoi::testing::random_reference;

ContactMask mask_with_first_contact(int frames, int first) {
  ContactMask m;
  m.frames.assign(frames, {false, false});
  if (first >= 0)
    for (int n = first; n < frames; ++n) m.frames[n] = {true, false};
  return m;
}

TEST(Onset, DelayAfterFirstContact) {
  EXPECT_EQ(detect_onset(mask_with_first_contact(300, 10), 30.0), 10 + 45);
  EXPECT_EQ(detect_onset(mask_with_first_contact(300, 0), 30.0, 0.0), 0);
  EXPECT_EQ(detect_onset(mask_with_first_contact(300, 0), 60.0, 1.0), 60);
}

TEST(Onset, ClampsToLastFrame) { EXPECT_EQ(detect_onset(mask_with_first_contact(50, 20), 30.0), 49); }

TEST(Onset, NoContactIsReported) {
  try {
    detect_onset(mask_with_first_contact(40, -1), 30.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoInteraction);
  }
}

// Independent statement of the three imputation cases.
Vec3 expected_rotation(const InpaintingPlan& plan, const std::vector<PoseFrame>& denoised, int n, int j) {
  const bool in_set = std::find(plan.interaction_joints.begin(), plan.interaction_joints.end(), j) !=
                      plan.interaction_joints.end();
  if (n < plan.onset_frame) return plan.reference.human.frames[n].joint_rotations[j];
  if (in_set) return plan.reference.human.frames[plan.onset_frame].joint_rotations[j];
  return denoised[n].joint_rotations[j];
}

TEST(Inpainting, MatchesCaseOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int frames = 5 + static_cast<int>(rng() % 40);
    InpaintingPlan plan;
    plan.reference = random_reference(frames, rng());
    plan.onset_frame = static_cast<int>(rng() % (frames + 1));
    for (int j = 0; j < plan.reference.human.skeleton.joint_count(); ++j)
      if (rng() % 3 == 0) plan.interaction_joints.push_back(j);
    const auto denoised = random_reference(frames, rng()).human.frames;
    const auto out = inpaint_pose(denoised, plan);
    for (int n = 0; n < frames; ++n) {
      for (int j = 0; j < plan.reference.human.skeleton.joint_count(); ++j)
        ASSERT_EQ(out[n].joint_rotations[j], expected_rotation(plan, denoised, n, j)) << n << " " << j;
      const PoseFrame& root_src = n < plan.onset_frame ? plan.reference.human.frames[n] : denoised[n];
      ASSERT_EQ(out[n].root_position, root_src.root_position);
    }
    EXPECT_TRUE(inpaint_pose(out, plan) == out);
  }
}

TEST(Inpainting, OnsetAtZeroAndAtEnd) {
  InpaintingPlan plan;
  plan.reference = random_reference(8, 1);
  plan.interaction_joints = {3, 8};
  const auto denoised = random_reference(8, 2).human.frames;
  plan.onset_frame = 8;
  EXPECT_TRUE(inpaint_pose(denoised, plan) == plan.reference.human.frames);
  plan.onset_frame = 0;
  const auto out = inpaint_pose(denoised, plan);
  for (int n = 0; n < 8; ++n) EXPECT_EQ(out[n].joint_rotations[8], plan.reference.human.frames[0].joint_rotations[8]);
  plan.onset_frame = 9;
  EXPECT_THROW(inpaint_pose(denoised, plan), Error);
}

TEST(Inpainting, LengthMismatchIsStructural) {
  InpaintingPlan plan;
  plan.reference = random_reference(8, 1);
  auto denoised = random_reference(7, 2).human.frames;
  try {
    inpaint_pose(denoised, plan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStructural);
  }
}

TEST(Denoiser, TensorRoundTrip) {
  const auto frames = random_reference(6, 4).human.frames;
  const auto back = frames_from_tensor(tensor_from_frames(frames), 18);
  for (std::size_t n = 0; n < frames.size(); ++n) {
    EXPECT_LT((back[n].root_position - frames[n].root_position).norm(), 1e-12);
    EXPECT_LT(back[n].root_rotation.angularDistance(frames[n].root_rotation), 1e-9);
    for (int j = 0; j < 18; ++j) EXPECT_EQ(back[n].joint_rotations[j], frames[n].joint_rotations[j]);
  }
}

TEST(Denoiser, SmoothingPreservesConstants) {
  MatX x = MatX::Constant(20, 3, 1.75);
  EXPECT_LT((smooth_rows(x, 2.0) - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Sampling, ConstraintsHoldAndSeedsRepeat) {
  const HOIReference ref = random_reference(40, 5, 0.2);
  InpaintingPlan plan;
  plan.reference = ref;
  plan.onset_frame = 12;
  plan.interaction_joints = ref.human.skeleton.interaction_joints;
  const ToyDenoiser denoiser = make_toy_denoiser({ref.human}, 2.0, 10, 3);
  const MotionClip a = sample_with_inpainting(denoiser, plan, {}, {.seed = 8});
  const MotionClip b = sample_with_inpainting(denoiser, plan, {}, {.seed = 8});
  ASSERT_EQ(a.size(), 40);
  for (int n = 0; n < 40; ++n) {
    EXPECT_TRUE(a.frames[n] == b.frames[n]);
    for (int j : plan.interaction_joints) {
      const int src = n < plan.onset_frame ? n : plan.onset_frame;
      EXPECT_EQ(a.frames[n].joint_rotations[j], ref.human.frames[src].joint_rotations[j]);
    }
    if (n < plan.onset_frame) EXPECT_TRUE(a.frames[n] == ref.human.frames[n]);
  }
}

TEST(Sampling, EmptyLibraryIsConfigurationError) {
  try {
    make_toy_denoiser({}, 2.0, 10, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfiguration);
  }
}

}  // namespace
}  // namespace dynhoi::planner
