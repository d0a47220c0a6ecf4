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
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "dynhoi/core/motion.hpp"

namespace dynhoi::planner {

/// Opaque conditioning passed through to the denoiser (e.g. a prompt).
struct Condition {
  std::string token;
};

// Row n of a motion tensor is [root_position(3), root_rotation_vector(3),
// joint_axis_angle(3 * joint_count)].
inline int motion_feature_dim(int joint_count) { return 6 + 3 * joint_count; }

inline MatX tensor_from_frames(const std::vector<PoseFrame>& frames) {
  require(!frames.empty(), ErrorKind::kStructural, "cannot build a tensor from zero frames");
  const int nj = static_cast<int>(frames.front().joint_rotations.size());
  MatX x(static_cast<Eigen::Index>(frames.size()), motion_feature_dim(nj));
  for (std::size_t n = 0; n < frames.size(); ++n) {
    const PoseFrame& f = frames[n];
    require(static_cast<int>(f.joint_rotations.size()) == nj, ErrorKind::kStructural, "ragged frame list");
    const auto row = static_cast<Eigen::Index>(n);
    x.block<1, 3>(row, 0) = f.root_position.transpose();
    x.block<1, 3>(row, 3) = axis_angle_from_quat(f.root_rotation).transpose();
    for (int j = 0; j < nj; ++j) x.block<1, 3>(row, 6 + 3 * j) = f.joint_rotations[j].transpose();
  }
  return x;
}

inline std::vector<PoseFrame> frames_from_tensor(const MatX& x, int joint_count) {
  require(x.cols() == motion_feature_dim(joint_count), ErrorKind::kStructural, "tensor width does not match skeleton");
  std::vector<PoseFrame> frames(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index n = 0; n < x.rows(); ++n) {
    PoseFrame& f = frames[static_cast<std::size_t>(n)];
    f.root_position = x.block<1, 3>(n, 0).transpose();
    f.root_rotation = quat_from_axis_angle(x.block<1, 3>(n, 3).transpose());
    f.joint_rotations.resize(joint_count);
    for (int j = 0; j < joint_count; ++j) f.joint_rotations[j] = x.block<1, 3>(n, 6 + 3 * j).transpose();
  }
  return frames;
}

/// Seam for a pretrained motion denoiser. step() maps x_k to the estimate
/// x̃_{k-1}; it must keep the tensor shape and be safe to call concurrently.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual int schedule_length() const = 0;
  virtual MatX step(const MatX& noisy, const Condition& condition, int k) const = 0;
};

/// Returns its input unchanged; the fixed point of the inpainting loop.
class IdentityDenoiser final : public Denoiser {
 public:
  explicit IdentityDenoiser(int steps) : steps_(steps) {}
  int schedule_length() const override { return steps_; }
  MatX step(const MatX& noisy, const Condition&, int) const override { return noisy; }

 private:
  int steps_;
};

/// Gaussian temporal smoothing along rows; sigma in frames, 0 disables it.
inline MatX smooth_rows(const MatX& x, double sigma) {
  if (sigma <= 0.0 || x.rows() < 2) return x;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  MatX out(x.rows(), x.cols());
  const auto rows = static_cast<int>(x.rows());
  for (int n = 0; n < rows; ++n) {
    double wsum = 0.0;
    out.row(n).setZero();
    for (int i = -radius; i <= radius; ++i) {
      const int m = n + i;
      if (m < 0 || m >= rows) continue;
      out.row(n) += kernel[i + radius] * x.row(m);
      wsum += kernel[i + radius];
    }
    out.row(n) /= wsum;
  }
  return out;
}

struct ToyDenoiserOptions {
  double smoothing = 2.0;    // temporal Gaussian sigma, frames
  int steps = 50;            // schedule length K
  double noise_scale = 0.0;  // extra noise at step k is noise_scale * (k - 1) / K
  std::uint64_t seed = 0;
};

/// Stand-in for a trained motion prior. Each step pulls every frame toward the
/// frame-wise nearest library clip (temporally smoothed) by the fraction 1/k,
/// so the final step lands exactly on the pull target.
class ToyDenoiser final : public Denoiser {
 public:
  ToyDenoiser(const std::vector<MotionClip>& library, ToyDenoiserOptions options) : options_(options) {
    require(!library.empty(), ErrorKind::kConfiguration, "toy denoiser needs a non-empty motion library");
    require(options_.steps >= 1, ErrorKind::kConfiguration, "schedule length must be at least 1");
    require(options_.smoothing >= 0.0, ErrorKind::kConfiguration, "smoothing must be non-negative");
    for (const MotionClip& clip : library) {
      clip.validate();
      library_.push_back(tensor_from_frames(clip.frames));
      require(library_.back().cols() == library_.front().cols(), ErrorKind::kConfiguration,
              "library clips use different skeletons");
    }
  }

  int schedule_length() const override { return options_.steps; }

  /// Frame-wise nearest-clip target before smoothing.
  MatX nearest_pull(const MatX& x) const {
    require(x.cols() == library_.front().cols(), ErrorKind::kIntegration, "tensor width differs from library");
    MatX target(x.rows(), x.cols());
    for (Eigen::Index n = 0; n < x.rows(); ++n) {
      double best = std::numeric_limits<double>::infinity();
      for (const MatX& clip : library_) {
        const Eigen::Index m = std::min<Eigen::Index>(n, clip.rows() - 1);
        const double d = (clip.row(m) - x.row(n)).squaredNorm();
        if (d < best) {
          best = d;
          target.row(n) = clip.row(m);
        }
      }
    }
    return target;
  }

  MatX target(const MatX& x) const { return smooth_rows(nearest_pull(x), options_.smoothing); }

  MatX step(const MatX& noisy, const Condition&, int k) const override {
    require(k >= 1 && k <= options_.steps, ErrorKind::kIntegration, "diffusion step out of range");
    const double alpha = 1.0 / static_cast<double>(k);
    MatX out = noisy + alpha * (target(noisy) - noisy);
    const double beta = options_.noise_scale * static_cast<double>(k - 1) / options_.steps;
    if (beta > 0.0) {
      std::mt19937_64 rng(options_.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(k));
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] += beta * gauss(rng);
    }
    return out;
  }

 private:
  std::vector<MatX> library_;
  ToyDenoiserOptions options_;
};

inline ToyDenoiser make_toy_denoiser(const std::vector<MotionClip>& library, double smoothing, int steps = 50,
                                     std::uint64_t seed = 0) {
  return ToyDenoiser(library, {smoothing, steps, 0.0, seed});
}

}  // namespace dynhoi::planner
