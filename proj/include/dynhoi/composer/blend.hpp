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

#include "dynhoi/composer/pca.hpp"

namespace dynhoi::composer {

inline constexpr double kDefaultRho = 0.2;
inline constexpr double kDefaultSigma = 0.08;

struct ComposerOutput {
  VecX w;       // per body DoF, [0, 1]
  VecX r;       // per body DoF, [-rho, rho]
  VecX mu;      // subspace coefficients, [-sigma, sigma]
  VecX action;  // [a_body; a_hand], filled by blend()
};

/// a_body = a_phc + (w + r) * (a_im_body - a_phc) + U mu,  a_hand = a_im_hand.
inline ComposerOutput blend(const VecX& a_phc, const VecX& a_im_full, const VecX& w, const VecX& r, const VecX& mu,
                            const EigenBasis& basis) {
  const Eigen::Index d = a_phc.size();
  require(a_im_full.size() >= d, ErrorKind::kStructural, "IM action is shorter than the body action");
  require(w.size() == d && r.size() == d, ErrorKind::kStructural, "w and r must match the body dimension");
  require(basis.u.rows() == d && basis.u.cols() == mu.size(), ErrorKind::kStructural,
          "basis shape does not match body dimension and mu");

  ComposerOutput out{w, r, mu, VecX(a_im_full.size())};
  const auto a_im_body = a_im_full.head(d);
  // std::lerp is exact at t = 0 and t = 1 and stays inside [a, b] for
  // t in [0, 1], which the naive a + t (b - a) does not guarantee.
  for (Eigen::Index i = 0; i < d; ++i) out.action(i) = std::lerp(a_phc(i), a_im_body(i), w(i) + r(i));
  if (mu.size() > 0) out.action.head(d) += basis.u * mu;
  out.action.tail(a_im_full.size() - d) = a_im_full.tail(a_im_full.size() - d);
  return out;
}

}  // namespace dynhoi::composer
