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

#include "dynhoi/composer/cem.hpp"
#include "dynhoi/composer/mlp.hpp"

namespace dynhoi::composer {

/// Episode return of a composer parameter set under an episode seed. The
/// callable owns the environment and the frozen experts.
using ComposerReturnFn = std::function<double(const ComposerParams&, std::uint64_t episode_seed)>;

struct TrainOptions {
  CemOptions cem;
  // Search std for bias entries; weight blocks use weight_std / sqrt(fan_in).
  double bias_std = 0.5;
  double weight_std = 0.5;
};

struct TrainResult {
  ComposerParams params;
  CemResult trace;
};

inline VecX group_std(const Mlp& net, double weight_std, double bias_std) {
  VecX s(net.parameter_count());
  const auto groups = net.parameter_groups();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int layer = static_cast<int>(g / 2);
    const double v = g % 2 == 0 ? weight_std / std::sqrt(static_cast<double>(net.weight(layer).cols())) : bias_std;
    s.segment(groups[g].first, groups[g].second - groups[g].first).setConstant(v);
  }
  return s;
}

/// Black-box composer training. Budget is the CEM iteration count; a budget
/// of 0 returns the initial parameters unchanged.
inline TrainResult train_composer(const ComposerReturnFn& episode_return, const ComposerParams& init,
                                  TrainOptions options) {
  init.validate();
  if (options.cem.per_param_std.size() == 0)
    options.cem.per_param_std = group_std(init.net, options.weight_std, options.bias_std);
  const ReturnFn flat = [&](const VecX& p, std::uint64_t seed) {
    ComposerParams candidate = init;
    candidate.net.unflatten(p);
    return episode_return(candidate, seed);
  };
  TrainResult out;
  out.trace = cem_optimize(init.net.flatten(), flat, options.cem);
  out.params = init;
  out.params.net.unflatten(out.trace.params);
  return out;
}

}  // namespace dynhoi::composer
