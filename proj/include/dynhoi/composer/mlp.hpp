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
#include <cstdint>
#include <random>
#include <vector>

#include "dynhoi/composer/blend.hpp"
#include "dynhoi/core/io.hpp"

namespace dynhoi::composer {

/// Fully connected network: tanh hidden layers, linear output layer.
class Mlp {
 public:
  Mlp() = default;

  /// sizes = {input, hidden..., output}; all weights zero.
  explicit Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    require(sizes_.size() >= 2, ErrorKind::kConfiguration, "network needs input and output sizes");
    for (int s : sizes_) require(s > 0, ErrorKind::kConfiguration, "layer sizes must be positive");
    for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
      weights_.push_back(MatX::Zero(sizes_[i + 1], sizes_[i]));
      biases_.push_back(VecX::Zero(sizes_[i + 1]));
    }
  }

  const std::vector<int>& sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int layer_count() const { return static_cast<int>(weights_.size()); }
  MatX& weight(int i) { return weights_[i]; }
  VecX& bias(int i) { return biases_[i]; }
  const MatX& weight(int i) const { return weights_[i]; }
  const VecX& bias(int i) const { return biases_[i]; }

  /// Scaled Gaussian init (std 1/sqrt(fan_in)), zero biases.
  void randomize(std::uint64_t seed, double gain = 1.0) {
    std::mt19937_64 rng(seed);
    for (auto& w : weights_) {
      std::normal_distribution<double> g(0.0, gain / std::sqrt(static_cast<double>(w.cols())));
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = g(rng);
    }
    for (auto& b : biases_) b.setZero();
  }

  VecX forward(const VecX& x) const {
    require(x.size() == input_dim(), ErrorKind::kStructural,
            "network input has dimension " + std::to_string(x.size()) + ", expected " + std::to_string(input_dim()));
    VecX h = x;
    for (int i = 0; i < layer_count(); ++i) {
      h = weights_[i] * h + biases_[i];
      if (i + 1 < layer_count()) h = h.array().tanh().matrix();
    }
    return h;
  }

  int parameter_count() const {
    int n = 0;
    for (int i = 0; i < layer_count(); ++i) n += static_cast<int>(weights_[i].size() + biases_[i].size());
    return n;
  }

  /// Layer by layer: weights (column-major) then bias.
  VecX flatten() const {
    VecX p(parameter_count());
    Eigen::Index at = 0;
    for (int i = 0; i < layer_count(); ++i) {
      p.segment(at, weights_[i].size()) = weights_[i].reshaped();
      at += weights_[i].size();
      p.segment(at, biases_[i].size()) = biases_[i];
      at += biases_[i].size();
    }
    return p;
  }

  void unflatten(const VecX& p) {
    require(p.size() == parameter_count(), ErrorKind::kStructural, "parameter vector has the wrong length");
    Eigen::Index at = 0;
    for (int i = 0; i < layer_count(); ++i) {
      weights_[i].reshaped() = p.segment(at, weights_[i].size());
      at += weights_[i].size();
      biases_[i] = p.segment(at, biases_[i].size());
      at += biases_[i].size();
    }
  }

  /// Index ranges [begin, end) of each weight and bias block in flatten() order.
  std::vector<std::pair<int, int>> parameter_groups() const {
    std::vector<std::pair<int, int>> groups;
    int at = 0;
    for (int i = 0; i < layer_count(); ++i) {
      groups.emplace_back(at, at + static_cast<int>(weights_[i].size()));
      at += static_cast<int>(weights_[i].size());
      groups.emplace_back(at, at + static_cast<int>(biases_[i].size()));
      at += static_cast<int>(biases_[i].size());
    }
    return groups;
  }

 private:
  std::vector<int> sizes_;
  std::vector<MatX> weights_;
  std::vector<VecX> biases_;
};

inline const std::vector<int> kPaperHiddenLayers = {1024, 1024, 512, 512};

struct ComposerParams {
  Mlp net;
  int body_dim = 0;
  int subspace_dim = kDefaultSubspaceDim;
  double rho = kDefaultRho;
  double sigma = kDefaultSigma;

  int head_dim() const { return 2 * body_dim + subspace_dim; }
  int input_dim() const { return net.input_dim(); }

  void validate() const {
    require(rho > 0.0, ErrorKind::kConfiguration, "rho must be positive");
    require(sigma >= 0.0, ErrorKind::kConfiguration, "sigma must be non-negative");
    require(body_dim > 0 && subspace_dim >= 0, ErrorKind::kConfiguration, "bad composer dimensions");
    require(net.output_dim() == head_dim(), ErrorKind::kStructural,
            "network output is " + std::to_string(net.output_dim()) + ", heads need " + std::to_string(head_dim()));
  }

  static ComposerParams make(int input_dim, int body_dim, const std::vector<int>& hidden,
                             int subspace_dim = kDefaultSubspaceDim) {
    std::vector<int> sizes{input_dim};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(2 * body_dim + subspace_dim);
    ComposerParams p;
    p.net = Mlp(sizes);
    p.body_dim = body_dim;
    p.subspace_dim = subspace_dim;
    p.validate();
    return p;
  }
};

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Raw head pre-activations split as [w | r | mu].
inline ComposerOutput heads_to_output(const VecX& head, const ComposerParams& params) {
  const int d = params.body_dim;
  ComposerOutput out;
  out.w = head.head(d).unaryExpr([](double v) { return sigmoid(v); });
  out.r = params.rho * head.segment(d, d).array().tanh().matrix();
  out.mu = params.sigma * head.tail(params.subspace_dim).array().tanh().matrix();
  // tanh can round to exactly 1, so the bounds are inclusive but never exceeded.
  return out;
}

inline ComposerOutput composer_forward(const ComposerParams& params, const VecX& observation,
                                       const EigenBasis& basis) {
  params.validate();
  require(basis.subspace_dim() == params.subspace_dim && basis.dim() == params.body_dim, ErrorKind::kStructural,
          "basis shape does not match composer parameters");
  return heads_to_output(params.net.forward(observation), params);
}

inline Json params_to_json(const ComposerParams& p) {
  Json layers = Json::array();
  for (int i = 0; i < p.net.layer_count(); ++i) {
    const MatX& w = p.net.weight(i);
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < w.rows(); ++r) rows.push_back(std::vector<double>(w.row(r).begin(), w.row(r).end()));
    const VecX& b = p.net.bias(i);
    layers.push_back({{"weight", rows}, {"bias", std::vector<double>(b.begin(), b.end())}});
  }
  return {{"sizes", p.net.sizes()}, {"body_dim", p.body_dim}, {"subspace_dim", p.subspace_dim},
          {"rho", p.rho},           {"sigma", p.sigma},       {"layers", layers}};
}

inline ComposerParams params_from_json(const Json& doc) {
  try {
    ComposerParams p;
    p.net = Mlp(doc.at("sizes").get<std::vector<int>>());
    p.body_dim = doc.at("body_dim").get<int>();
    p.subspace_dim = doc.at("subspace_dim").get<int>();
    p.rho = doc.at("rho").get<double>();
    p.sigma = doc.at("sigma").get<double>();
    const Json& layers = doc.at("layers");
    require(static_cast<int>(layers.size()) == p.net.layer_count(), ErrorKind::kParse, "layer count mismatch");
    for (int i = 0; i < p.net.layer_count(); ++i) {
      MatX& w = p.net.weight(i);
      const Json& rows = layers[i].at("weight");
      require(static_cast<Eigen::Index>(rows.size()) == w.rows(), ErrorKind::kParse, "weight row count mismatch");
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        const auto row = rows[r].get<std::vector<double>>();
        require(static_cast<Eigen::Index>(row.size()) == w.cols(), ErrorKind::kParse, "weight column count mismatch");
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = row[c];
      }
      const auto b = layers[i].at("bias").get<std::vector<double>>();
      require(static_cast<Eigen::Index>(b.size()) == p.net.bias(i).size(), ErrorKind::kParse, "bias size mismatch");
      for (std::size_t k = 0; k < b.size(); ++k) p.net.bias(i)(k) = b[k];
    }
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("composer params: ") + e.what());
  }
}

}  // namespace dynhoi::composer
