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

// Trains the composer on the carry-while-jump clip and compares it with
// the two experts it blends.

#include <cstdio>

#include "dynhoi/metrics/success.hpp"
#include "dynhoi/pipeline/commands.hpp"

using namespace dynhoi;

int main(int argc, char** argv) {
  const int budget = argc > 1 ? std::atoi(argv[1]) : 10;
  const SkeletonSpec sk = default_skeleton();
  const HOIReference ref = demo::carry_jump(sk);
  const sim::Task task = sim::Task::make(ref, sim::SimParams::defaults(sk));
  auto spec = metrics::SuccessSpec::make(metrics::Style::kJumpForward, sk);

  pipeline::TrainOptions opt;
  opt.budget = budget;
  const auto trained = pipeline::train_mode(task, composer::BlendMode::kMlpPca, opt);
  for (const auto& p : trained.trace.curve)
    std::printf("iteration %2d  mean return %8.2f  best %8.2f\n", p.iteration, p.mean_return, p.best_return);

  auto success_rate = [&](composer::BlendMode mode, const composer::ComposerParams& params) {
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      wins += metrics::success(task.run(mode, params, seed).trajectory, ref, spec).success ? 1 : 0;
    return wins / 10.0;
  };
  const auto init = task.make_params({32});
  std::printf("SR expert_phc %.1f  expert_im %.1f  mlp_pca %.1f\n", success_rate(composer::BlendMode::kExpertPhc, init),
              success_rate(composer::BlendMode::kExpertIm, init),
              success_rate(composer::BlendMode::kMlpPca, trained.params));
  return 0;
}
