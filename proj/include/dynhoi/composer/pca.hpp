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
#include <deque>

#include <Eigen/Eigenvalues>

#include "dynhoi/core/math.hpp"

namespace dynhoi::composer {

inline constexpr int kDefaultBufferCapacity = 16;
inline constexpr int kDefaultSubspaceDim = 4;

/// FIFO ring of recent body-action differences a_IM - a_PHC.
class DeltaBuffer {
 public:
  explicit DeltaBuffer(int dim = 0, int capacity = kDefaultBufferCapacity) : dim_(dim), capacity_(capacity) {
    require(capacity > 0, ErrorKind::kConfiguration, "buffer capacity must be positive");
    require(dim >= 0, ErrorKind::kConfiguration, "buffer dimension must be non-negative");
  }

  void push(const VecX& delta) {
    require(delta.size() == dim_, ErrorKind::kStructural,
            "delta has dimension " + std::to_string(delta.size()) + ", buffer expects " + std::to_string(dim_));
    if (static_cast<int>(entries_.size()) == capacity_) entries_.pop_front();
    entries_.push_back(delta);
  }

  void clear() { entries_.clear(); }
  int size() const { return static_cast<int>(entries_.size()); }
  int dim() const { return dim_; }
  int capacity() const { return capacity_; }
  const std::deque<VecX>& entries() const { return entries_; }

  /// Entries as rows, oldest first.
  MatX matrix() const {
    MatX m(size(), dim_);
    for (int i = 0; i < size(); ++i) m.row(i) = entries_[i].transpose();
    return m;
  }

 private:
  int dim_;
  int capacity_;
  std::deque<VecX> entries_;
};

struct EigenBasis {
  MatX u;              // dim x S, orthonormal columns; unused columns are zero
  VecX eigenvalues;    // S values of the centered scatter matrix, descending
  int valid_columns = 0;
  bool stale = true;   // fewer than S usable principal directions

  int dim() const { return static_cast<int>(u.rows()); }
  int subspace_dim() const { return static_cast<int>(u.cols()); }

  static EigenBasis zero(int dim, int s) {
    EigenBasis b;
    b.u = MatX::Zero(dim, s);
    b.eigenvalues = VecX::Zero(s);
    return b;
  }
};

/// Top-S principal directions of the mean-centered buffer.
///
/// Works through the n x n Gram matrix of the centered rows (n <= B is far
/// smaller than the action dimension), lifts eigenvectors back to action
/// space and re-orthonormalizes. Directions whose eigenvalue is numerically
/// zero are left as zero columns and the basis is flagged stale.
inline EigenBasis update_basis(const DeltaBuffer& buffer, int s = kDefaultSubspaceDim) {
  require(s >= 0, ErrorKind::kConfiguration, "subspace dimension must be non-negative");
  EigenBasis basis = EigenBasis::zero(buffer.dim(), s);
  const int n = buffer.size();
  if (n < 2 || s == 0 || buffer.dim() == 0) {
    basis.stale = s > 0;
    return basis;
  }

  const MatX raw = buffer.matrix();
  const VecX mean = raw.colwise().mean().transpose();
  const MatX x = raw.rowwise() - mean.transpose();
  const MatX gram = x * x.transpose();
  Eigen::SelfAdjointEigenSolver<MatX> eig(gram);
  const VecX& lambda = eig.eigenvalues();  // ascending
  const MatX& v = eig.eigenvectors();

  const double scale = std::max(raw.cwiseAbs2().rowwise().sum().maxCoeff(), 1e-300);
  const double floor = std::max(1e-12 * lambda(n - 1), 1e-24 * scale);

  int k = 0;
  for (int i = n - 1; i >= 0 && k < std::min(s, buffer.dim()); --i) {
    if (!(lambda(i) > floor)) break;
    VecX col = x.transpose() * v.col(i);
    // Gram-Schmidt against accepted columns, twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (int c = 0; c < k; ++c) col -= basis.u.col(c).dot(col) * basis.u.col(c);
    const double norm = col.norm();
    if (!(norm > 0.0)) break;
    col /= norm;
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0.0) col = -col;
    basis.u.col(k) = col;
    basis.eigenvalues(k) = lambda(i);
    ++k;
  }
  basis.valid_columns = k;
  basis.stale = k < s;
  return basis;
}

}  // namespace dynhoi::composer
