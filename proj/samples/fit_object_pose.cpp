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

// Recovers a rigid object pose from palm anchors carried by a moved hand.

#include <cstdio>

#include "dynhoi/align/anchors.hpp"
#include "dynhoi/pipeline/demo.hpp"

using namespace dynhoi;

namespace {

void report(const char* label, const MotionClip& moved, const HOIReference& ref, int onset) {
  const auto anchors = align::default_object_anchors(ref, onset);
  const auto fit = align::recover_object_trajectory(moved, ref, anchors, onset);
  const int n = moved.size() - 1;
  const Vec3 p = fit.object.poses[n].position;
  std::printf("%-22s box at (%.3f, %.3f, %.3f), anchor residual %.2e m^2\n", label, p.x(), p.y(), p.z(),
              fit.residuals[n]);
}

}  // namespace

int main() {
  const SkeletonSpec sk = default_skeleton();
  const HOIReference ref = demo::carry_stand(sk);
  const int onset = 60;
  report("reference", ref.human, ref, onset);

  // A whole-body turn keeps both palms on the box, so the fit is exact.
  MotionClip turned = ref.human;
  for (int n = onset + 1; n < turned.size(); ++n)
    turned.frames[n].root_rotation = quat_from_axis_angle(Vec3(0, 0, 0.8)) * turned.frames[n].root_rotation;
  report("body turned 0.8 rad", turned, ref, onset);

  // Bending one elbow pulls the palms apart; the fit splits the difference.
  MotionClip bent = ref.human;
  const int elbow = sk.index_of("left_elbow");
  for (int n = onset + 1; n < bent.size(); ++n) bent.frames[n].joint_rotations[elbow] += Vec3(0, 0, 0.3);
  report("left elbow bent", bent, ref, onset);
  return 0;
}
