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

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <vector>

#include "dynhoi/core/math.hpp"
#include "dynhoi/core/random.hpp"

namespace dynhoi::composer {

/// Episode return of a flat parameter vector under a given episode seed.
using ReturnFn = std::function<double(const VecX& params, std::uint64_t episode_seed)>;

struct CemOptions {
  int iterations = 20;
  int population = 16;
  int elites = 4;
  double init_std = 0.3;
  VecX per_param_std;  // overrides init_std when non-empty
  double min_std = 1e-3;
  double std_smoothing = 0.5;  // weight of the previous std in each update
  int episodes_per_candidate = 1;
  int eval_episodes = 8;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct CemPoint {
  int iteration = 0;
  double mean_return = 0.0;  // candidate average this iteration
  double best_return = 0.0;  // best candidate this iteration
};

struct CemResult {
  VecX params;
  double init_return = 0.0;   // mean over the evaluation episodes
  double final_return = 0.0;
  std::vector<CemPoint> curve;
};

namespace detail {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index writes
// only its own slot, so results do not depend on scheduling.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::clamp(threads, 1, std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline double mean_return(const ReturnFn& fn, const VecX& params, std::uint64_t seed, int episodes) {
  double sum = 0.0;
  for (int e = 0; e < episodes; ++e) sum += fn(params, mix_seed(seed, static_cast<std::uint64_t>(e)));
  return sum / episodes;
}

}  // namespace detail

/// Cross-entropy method with a diagonal Gaussian search distribution.
/// Candidate 0 of each generation is the current mean. Every candidate of a
/// generation sees the same episode seeds. The result is never worse than
/// `init` on the held-out evaluation episodes.
inline CemResult cem_optimize(const VecX& init, const ReturnFn& fn, const CemOptions& opt) {
  require(opt.population >= 2 && opt.elites >= 1 && opt.elites <= opt.population, ErrorKind::kConfiguration,
          "CEM needs population >= 2 and 1 <= elites <= population");
  require(opt.episodes_per_candidate >= 1 && opt.eval_episodes >= 1, ErrorKind::kConfiguration,
          "episode counts must be positive");
  require(opt.per_param_std.size() == 0 || opt.per_param_std.size() == init.size(), ErrorKind::kConfiguration,
          "per-parameter std has the wrong length");

  const std::uint64_t eval_seed = mix_seed(opt.seed, 0xe7a1ULL);
  CemResult result;
  result.params = init;
  result.init_return = detail::mean_return(fn, init, eval_seed, opt.eval_episodes);
  result.final_return = result.init_return;
  if (opt.iterations <= 0) return result;

  VecX mean = init;
  VecX std = opt.per_param_std.size() ? opt.per_param_std : VecX::Constant(init.size(), opt.init_std);
  VecX best = init;
  double best_score = -std::numeric_limits<double>::infinity();

  for (int it = 0; it < opt.iterations; ++it) {
    std::vector<VecX> cand(opt.population);
    for (int c = 0; c < opt.population; ++c) {
      cand[c] = mean;
      if (c == 0) continue;
      std::mt19937_64 rng(mix_seed(opt.seed, static_cast<std::uint64_t>(it), static_cast<std::uint64_t>(c)));
      std::normal_distribution<double> g;
      for (Eigen::Index i = 0; i < mean.size(); ++i) cand[c](i) += std(i) * g(rng);
    }
    const std::uint64_t episode_seed = mix_seed(opt.seed, 0x5eedULL, static_cast<std::uint64_t>(it));
    std::vector<double> score(opt.population);
    detail::parallel_for(opt.population, opt.threads, [&](int c) {
      score[c] = detail::mean_return(fn, cand[c], episode_seed, opt.episodes_per_candidate);
    });

    std::vector<int> order(opt.population);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });

    VecX new_mean = VecX::Zero(mean.size());
    for (int e = 0; e < opt.elites; ++e) new_mean += cand[order[e]];
    new_mean /= opt.elites;
    VecX var = VecX::Zero(mean.size());
    for (int e = 0; e < opt.elites; ++e) var += (cand[order[e]] - new_mean).cwiseAbs2();
    var /= opt.elites;
    mean = new_mean;
    std = (opt.std_smoothing * std + (1.0 - opt.std_smoothing) * var.cwiseSqrt()).cwiseMax(opt.min_std);

    if (score[order[0]] > best_score) {
      best_score = score[order[0]];
      best = cand[order[0]];
    }
    CemPoint p;
    p.iteration = it;
    p.best_return = score[order[0]];
    p.mean_return = std::accumulate(score.begin(), score.end(), 0.0) / opt.population;
    result.curve.push_back(p);
  }

  // Final pick on held-out episodes: the last mean or the best sample seen.
  const double mean_ret = detail::mean_return(fn, mean, eval_seed, opt.eval_episodes);
  const double best_ret = detail::mean_return(fn, best, eval_seed, opt.eval_episodes);
  const VecX& pick = best_ret > mean_ret ? best : mean;
  const double pick_ret = std::max(best_ret, mean_ret);
  if (pick_ret >= result.init_return) {
    result.params = pick;
    result.final_return = pick_ret;
  }
  return result;
}

}  // namespace dynhoi::composer
