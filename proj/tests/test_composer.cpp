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

#include <random>

#include <gtest/gtest.h>

#include "dynhoi/composer/policies.hpp"
#include "dynhoi/composer/train.hpp"

namespace dynhoi::composer {
namespace {

VecX random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  VecX v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

class AffineExpert final : public Expert {
 public:
  AffineExpert(MatX a, VecX b, Coverage c) : a_(std::move(a)), b_(std::move(b)), c_(c) {}
  VecX act(const VecX& obs, const VecX&) const override { return a_ * obs + b_; }
  int action_dim() const override { return static_cast<int>(b_.size()); }
  Coverage coverage() const override { return c_; }

 private:
  MatX a_;
  VecX b_;
  Coverage c_;
};

TEST(Blend, WeightOneGivesImBody) {
  std::mt19937_64 rng(1);
  const VecX phc = random_vec(rng, 6), im = random_vec(rng, 8);
  const auto out = blend(phc, im, VecX::Ones(6), VecX::Zero(6), VecX::Zero(4), EigenBasis::zero(6, 4));
  EXPECT_EQ(out.action.head(6), im.head(6));
  EXPECT_EQ(out.action.tail(2), im.tail(2));
}

TEST(Blend, WeightZeroGivesPhcBody) {
  std::mt19937_64 rng(2);
  const VecX phc = random_vec(rng, 6), im = random_vec(rng, 8);
  const auto out = blend(phc, im, VecX::Zero(6), VecX::Zero(6), VecX::Zero(4), EigenBasis::zero(6, 4));
  EXPECT_EQ(out.action.head(6), phc);
}

TEST(Blend, HandEvaluatedExample) {
  const int d = 5;
  const VecX phc = VecX::LinSpaced(d, -1.0, 1.0);
  VecX im(d + 2);
  im << phc + VecX::Ones(d), 0.25, 0.75;
  EigenBasis basis = EigenBasis::zero(d, 4);
  basis.u.col(0) = VecX::Unit(d, 2);
  basis.u.col(1) = VecX::Unit(d, 0);
  VecX mu = VecX::Zero(4);
  mu(0) = kDefaultSigma;
  const auto out = blend(phc, im, VecX::Constant(d, 0.5), VecX::Constant(d, 0.1), mu, basis);
  VecX expected = phc + VecX::Constant(d, 0.6);
  expected(2) += kDefaultSigma;
  EXPECT_LT((out.action.head(d) - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(out.action(d), 0.25);
  EXPECT_EQ(out.action(d + 1), 0.75);
}

TEST(Blend, DimensionMismatchIsStructural) {
  try {
    blend(VecX::Zero(4), VecX::Zero(6), VecX::Zero(3), VecX::Zero(4), VecX::Zero(2), EigenBasis::zero(4, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStructural);
  }
}

TEST(DeltaBuffer, FifoEviction) {
  DeltaBuffer b(2, 3);
  for (int i = 0; i < 5; ++i) b.push(VecX::Constant(2, i));
  ASSERT_EQ(b.size(), 3);
  EXPECT_EQ(b.entries().front()(0), 2.0);
  EXPECT_EQ(b.entries().back()(0), 4.0);
  EXPECT_THROW(b.push(VecX::Zero(3)), Error);
}

TEST(Pca, IdenticalEntriesAreStale) {
  DeltaBuffer b(7);
  for (int i = 0; i < 16; ++i) b.push(VecX::LinSpaced(7, 0.1, 0.7));
  const EigenBasis basis = update_basis(b, 4);
  EXPECT_TRUE(basis.stale);
  EXPECT_EQ(basis.valid_columns, 0);
  EXPECT_EQ((basis.u * VecX::Constant(4, kDefaultSigma)).norm(), 0.0);
}

TEST(Pca, FewEntries) {
  DeltaBuffer b(5);
  EXPECT_TRUE(update_basis(b, 4).stale);
  b.push(VecX::Unit(5, 0));
  EXPECT_EQ(update_basis(b, 4).valid_columns, 0);
  b.push(VecX::Unit(5, 1));
  b.push(VecX::Unit(5, 2));
  const EigenBasis basis = update_basis(b, 4);
  EXPECT_EQ(basis.valid_columns, 2);  // 3 centered points span a plane
  EXPECT_TRUE(basis.stale);
  EXPECT_EQ(basis.u.col(2).norm(), 0.0);
  EXPECT_EQ(basis.u.col(3).norm(), 0.0);
}

TEST(Pca, RankOneDirection) {
  std::mt19937_64 rng(4);
  const VecX v = random_vec(rng, 45).normalized();
  DeltaBuffer b(45);
  std::normal_distribution<double> g;
  for (int i = 0; i < 16; ++i) b.push(g(rng) * v + random_vec(rng, 45, 1e-9));
  const EigenBasis basis = update_basis(b, 4);
  EXPECT_GT(std::abs(basis.u.col(0).dot(v)), 1 - 1e-6);
}

TEST(Pca, MatchesFullEigendecomposition) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    DeltaBuffer b(45);
    for (int i = 0; i < 16; ++i) b.push(random_vec(rng, 45));
    const EigenBasis basis = update_basis(b, 4);
    ASSERT_FALSE(basis.stale);
    EXPECT_LT((basis.u.transpose() * basis.u - MatX::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-9);

    const MatX raw = b.matrix();
    const MatX x = raw.rowwise() - raw.colwise().mean();
    Eigen::SelfAdjointEigenSolver<MatX> oracle(x.transpose() * x);
    const VecX lambda = oracle.eigenvalues().reverse();
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(basis.eigenvalues(k), lambda(k), 1e-9 * lambda(0));
    const double discarded = lambda.tail(41).sum();
    const double recon = (x - x * basis.u * basis.u.transpose()).squaredNorm();
    EXPECT_NEAR(recon, discarded, 1e-9);
    for (int k = 0; k < 4; ++k) {
      Eigen::Index arg = 0;
      basis.u.col(k).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(basis.u(arg, k), 0.0);
    }
  }
}

ComposerParams random_params(int in, int d, std::uint64_t seed, double gain = 1.0) {
  ComposerParams p = ComposerParams::make(in, d, {8, 8});
  p.net.randomize(seed, gain);
  std::mt19937_64 rng(seed + 1);
  for (int l = 0; l < p.net.layer_count(); ++l) p.net.bias(l) = random_vec(rng, p.net.bias(l).size(), gain);
  return p;
}

TEST(ComposerForward, ZeroWeights) {
  const ComposerParams p = ComposerParams::make(10, 6, {4});
  const auto out = composer_forward(p, VecX::Ones(10), EigenBasis::zero(6, 4));
  EXPECT_EQ(out.w, VecX::Constant(6, 0.5));
  EXPECT_EQ(out.r, VecX::Zero(6));
  EXPECT_EQ(out.mu, VecX::Zero(4));
}

TEST(ComposerForward, BoundsUnderExtremeWeights) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const ComposerParams p = random_params(5, 7, rng(), 1e3);
    const auto out = composer_forward(p, random_vec(rng, 5, 100.0), EigenBasis::zero(7, 4));
    EXPECT_TRUE((out.w.array() >= 0.0).all() && (out.w.array() <= 1.0).all());
    EXPECT_LE(out.r.cwiseAbs().maxCoeff(), p.rho);
    EXPECT_LE(out.mu.cwiseAbs().maxCoeff(), p.sigma);
  }
}

TEST(ComposerForward, DeterministicAndPaperHeadSize) {
  const ComposerParams p = random_params(5, 7, 42);
  const VecX x = VecX::LinSpaced(5, -1, 1);
  EXPECT_EQ(composer_forward(p, x, EigenBasis::zero(7, 4)).w, composer_forward(p, x, EigenBasis::zero(7, 4)).w);
  ComposerParams paper;
  paper.body_dim = 153;
  EXPECT_EQ(paper.head_dim(), 310);
  EXPECT_THROW(composer_forward(p, VecX::Zero(4), EigenBasis::zero(7, 4)), Error);
}

TEST(ComposerParams, JsonRoundTrip) {
  const ComposerParams p = random_params(5, 7, 9);
  const ComposerParams back = params_from_json(Json::parse(params_to_json(p).dump()));
  EXPECT_EQ(back.net.flatten(), p.net.flatten());
  EXPECT_EQ(back.rho, p.rho);
}

struct ExpertPair {
  AffineExpert phc, im;
};

ExpertPair random_experts(std::mt19937_64& rng, int obs, int d, int d_hand) {
  MatX a1(d, obs), a2(d + d_hand, obs);
  for (Eigen::Index i = 0; i < a1.size(); ++i) a1.data()[i] = random_vec(rng, 1)(0);
  for (Eigen::Index i = 0; i < a2.size(); ++i) a2.data()[i] = random_vec(rng, 1)(0);
  return {AffineExpert(a1, random_vec(rng, d), Coverage::kBodyOnly),
          AffineExpert(a2, random_vec(rng, d + d_hand), Coverage::kFull)};
}

TEST(ComposerStep, IdenticalExpertsRecoverPhc) {
  std::mt19937_64 rng(7);
  const MatX a = MatX::Random(6, 3);
  const VecX b = VecX::Random(6);
  VecX b_full(8);
  b_full << b, 0.3, 0.9;
  MatX a_full = MatX::Zero(8, 3);
  a_full.topRows(6) = a;
  const AffineExpert phc(a, b, Coverage::kBodyOnly), im(a_full, b_full, Coverage::kFull);
  const ComposerParams p = random_params(3 + 3 + 6 + 8, 6, 11);
  DeltaBuffer buffer(6);
  for (int n = 0; n < 20; ++n) {
    const VecX obs = random_vec(rng, 3);
    const StepResult s = composer_step(p, phc, im, obs, VecX::Zero(3), buffer, n);
    EXPECT_EQ(s.action.head(6), phc.act(obs, {}));
    EXPECT_EQ(s.action.tail(2), b_full.tail(2));
    EXPECT_TRUE(s.basis.stale);
  }
}

TEST(ComposerStep, BufferReplaysLastSixteenDeltas) {
  std::mt19937_64 rng(8);
  const auto experts = random_experts(rng, 3, 6, 2);
  const ComposerParams p = random_params(3 + 3 + 6 + 8, 6, 12);
  DeltaBuffer buffer(6);
  std::vector<VecX> trace;
  for (int n = 0; n < 100; ++n) {
    const VecX obs = random_vec(rng, 3);
    const StepResult s = composer_step(p, experts.phc, experts.im, obs, VecX::Zero(3), buffer, n);
    trace.push_back(experts.im.act(obs, {}).head(6) - experts.phc.act(obs, {}));
    ASSERT_EQ(buffer.size(), std::min(n + 1, 16));
    for (int k = 0; k < buffer.size(); ++k)
      ASSERT_EQ(buffer.entries()[k], trace[trace.size() - buffer.size() + k]);
    if (n == 0) EXPECT_EQ(s.output.mu.size() ? (s.basis.u * s.output.mu).norm() : 0.0, 0.0);
    EXPECT_EQ(s.action.tail(2), experts.im.act(obs, {}).tail(2));
  }
}

TEST(Policies, HardMoePinnedMatchesExpert) {
  std::mt19937_64 rng(9);
  const auto experts = random_experts(rng, 3, 6, 2);
  ComposerParams p = ComposerParams::make(3 + 3 + 6 + 8, 6, {4});
  p.net.bias(1).head(6).setConstant(-50.0);
  BlendPolicy moe(BlendMode::kHardMoe, experts.phc, experts.im, {.params = p});
  BlendPolicy phc(BlendMode::kExpertPhc, experts.phc, experts.im, {});
  for (int n = 0; n < 10; ++n) {
    const VecX obs = random_vec(rng, 3);
    EXPECT_EQ(moe.act(obs, VecX::Zero(3), n).action, phc.act(obs, VecX::Zero(3), n).action);
  }
}

TEST(Policies, HeuristicHandAndZeroResidual) {
  std::mt19937_64 rng(10);
  const auto experts = random_experts(rng, 3, 6, 2);
  const ComposerParams zero = ComposerParams::make(3 + 3 + 6 + 8, 6, {4});
  BlendPolicy hand(BlendMode::kHeuristicHand, experts.phc, experts.im, {});
  BlendPolicy residual(BlendMode::kResidual, experts.phc, experts.im, {.params = zero});
  for (int n = 0; n < 10; ++n) {
    const VecX obs = random_vec(rng, 3);
    const VecX a_phc = experts.phc.act(obs, {}), a_im = experts.im.act(obs, {});
    const VecX h = hand.act(obs, VecX::Zero(3), n).action;
    EXPECT_EQ(h.head(6), a_phc);
    EXPECT_EQ(h.tail(2), a_im.tail(2));
    EXPECT_EQ(residual.act(obs, VecX::Zero(3), n).action, a_im);
  }
}

TEST(Policies, ModeNamesRoundTrip) {
  for (const auto& [mode, name] : kBlendModeNames) EXPECT_EQ(parse_blend_mode(name), mode);
  EXPECT_THROW(parse_blend_mode("soft_moe"), Error);
}

// Noisy concave objective with optimum at (1, -2, 3).
double quadratic_return(const VecX& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.01);
  const Vec3 target(1, -2, 3);
  return -(p - target).squaredNorm() + g(rng);
}

TEST(Cem, ZeroBudgetReturnsInit) {
  CemOptions opt;
  opt.iterations = 0;
  const VecX init = VecX::Constant(3, 0.5);
  EXPECT_EQ(cem_optimize(init, quadratic_return, opt).params, init);
}

TEST(Cem, ImprovesAndIsDeterministicAcrossThreadCounts) {
  CemOptions opt;
  opt.iterations = 30;
  opt.init_std = 1.0;
  opt.seed = 3;
  const CemResult a = cem_optimize(VecX::Zero(3), quadratic_return, opt);
  opt.threads = 3;
  const CemResult b = cem_optimize(VecX::Zero(3), quadratic_return, opt);
  EXPECT_EQ(a.params, b.params);
  EXPECT_GT(a.final_return, a.init_return);
  EXPECT_LT((a.params - VecX(Vec3(1, -2, 3))).norm(), 0.2);
}

TEST(Cem, NeverReturnsWorseThanInit) {
  CemOptions opt;
  opt.iterations = 3;
  opt.init_std = 50.0;
  const VecX init(Vec3(1, -2, 3));
  const CemResult r = cem_optimize(init, quadratic_return, opt);
  EXPECT_GE(r.final_return, r.init_return);
}

TEST(Train, ExpertsUntouchedAndSeeded) {
  std::mt19937_64 rng(12);
  const auto experts = random_experts(rng, 3, 6, 2);
  const VecX probe = VecX::Ones(3);
  const VecX before_phc = experts.phc.act(probe, {}), before_im = experts.im.act(probe, {});
  const ComposerParams init = ComposerParams::make(3 + 3 + 6 + 8, 6, {4});
  const ComposerReturnFn fn = [&](const ComposerParams& p, std::uint64_t seed) {
    BlendPolicy policy(BlendMode::kMlpPca, experts.phc, experts.im, {.params = p});
    std::mt19937_64 r(seed);
    double ret = 0.0;
    for (int n = 0; n < 5; ++n) {
      const VecX obs = random_vec(r, 3);
      const VecX a = policy.act(obs, VecX::Zero(3), n).action;
      ret -= (a.head(6) - experts.im.act(obs, {}).head(6)).squaredNorm();
    }
    return ret;
  };
  TrainOptions opt;
  opt.cem.iterations = 5;
  opt.cem.seed = 1;
  const TrainResult a = train_composer(fn, init, opt);
  const TrainResult b = train_composer(fn, init, opt);
  EXPECT_EQ(a.params.net.flatten(), b.params.net.flatten());
  EXPECT_GE(a.trace.final_return, a.trace.init_return);
  EXPECT_EQ(experts.phc.act(probe, {}), before_phc);
  EXPECT_EQ(experts.im.act(probe, {}), before_im);
  opt.cem.iterations = 0;
  EXPECT_EQ(train_composer(fn, init, opt).params.net.flatten(), init.net.flatten());
}

}  // namespace
}  // namespace dynhoi::composer
