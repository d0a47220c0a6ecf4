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

// Plans a jump onto a static carry and checks that the box stays in hand.

#include <cstdio>

#include "dynhoi/align/anchors.hpp"
#include "dynhoi/metrics/quality.hpp"
#include "dynhoi/pipeline/demo.hpp"
#include "dynhoi/planner/inpainting.hpp"

using namespace dynhoi;

int main() {
  const SkeletonSpec sk = default_skeleton();
  const HOIReference ref = demo::carry_stand(sk);

  const auto plan = planner::make_plan(ref, /*onset_delay_s=*/1.5);
  const auto denoiser = planner::make_toy_denoiser(demo::jump_library(sk), /*smoothing=*/2.0);
  const MotionClip motion = planner::sample_with_inpainting(denoiser, plan, {"jump"}, {.seed = 1});

  const auto anchors = align::default_object_anchors(ref, plan.onset_frame);
  const HOIReference planned = align::align_reference(motion, ref, anchors, plan.onset_frame);

  double peak = 0.0;
  for (const auto& f : planned.human.frames) peak = std::max(peak, f.root_position.z());
  std::printf("onset frame %d, pelvis peak %.3f m\n", plan.onset_frame, peak);
  const int from = plan.onset_frame + 1;
  std::printf("after onset: C%% %.3f, C_cons %.2e m\n", metrics::contact_percentage(planned.contacts, from),
              metrics::contact_consistency(planned, from));
  return 0;
}
