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

#include <span>
#include <vector>

#include <Eigen/SVD>

#include "dynhoi/core/math.hpp"

namespace dynhoi::align {

struct KabschResult {
  RigidTransform transform;
  double residual = 0.0;    // sum of squared point errors after alignment
  bool degenerate = false;  // collinear source: rotation about the line is unobservable
};

/// Least-squares proper rigid motion taking source onto target
/// (argmin over SO(3) x R^3 of ||R s_i + t - t_i||^2).
inline KabschResult kabsch_align(std::span<const Vec3> source, std::span<const Vec3> target) {
  require(source.size() == target.size(), ErrorKind::kStructural, "source and target point counts differ");
  require(source.size() >= 3, ErrorKind::kValidation, "alignment needs at least 3 point pairs");
  const auto count = static_cast<double>(source.size());
  Vec3 cs = Vec3::Zero();
  Vec3 ct = Vec3::Zero();
  for (std::size_t i = 0; i < source.size(); ++i) {
    require(source[i].allFinite() && target[i].allFinite(), ErrorKind::kValidation, "non-finite point");
    cs += source[i];
    ct += target[i];
  }
  cs /= count;
  ct /= count;

  Mat3 h = Mat3::Zero();   // cross-covariance, source x target
  Mat3 ss = Mat3::Zero();  // source scatter
  double spread = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const Vec3 a = source[i] - cs;
    h += a * (target[i] - ct).transpose();
    ss += a * a.transpose();
    spread = std::max(spread, a.norm());
  }
  if (spread <= 1e-12) throw Error(ErrorKind::kDegenerate, "all source points coincide");

  KabschResult result;
  Eigen::JacobiSVD<Mat3> scatter(ss, Eigen::ComputeFullU);
  const auto& sv = scatter.singularValues();
  if (sv(1) <= 1e-12 * sv(0)) {
    // Collinear source: only the image of the line direction is determined.
    // Pick the rotation closest to identity that maps it onto the best target
    // direction.
    result.degenerate = true;
    const Vec3 u = scatter.matrixU().col(0);
    Vec3 m = Vec3::Zero();
    for (std::size_t i = 0; i < source.size(); ++i) m += (source[i] - cs).dot(u) * (target[i] - ct);
    Mat3 r = Mat3::Identity();
    if (m.norm() > 1e-15) r = Quat::FromTwoVectors(u, m.normalized()).toRotationMatrix();
    result.transform.rotation = r;
  } else {
    Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat3 u = svd.matrixU();
    const Mat3 v = svd.matrixV();
    Mat3 d = Mat3::Identity();
    if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
    result.transform.rotation = v * d * u.transpose();
  }
  result.transform.translation = ct - result.transform.rotation * cs;
  for (std::size_t i = 0; i < source.size(); ++i)
    result.residual += (result.transform.apply(source[i]) - target[i]).squaredNorm();
  return result;
}

}  // namespace dynhoi::align
