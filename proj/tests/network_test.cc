// Copyright 2026 The ltaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ltaudit/network.h"

#include <cmath>

#include "gtest/gtest.h"
#include "ltaudit/errors.h"
#include "ltaudit/rng.h"
#include "oracles.h"

namespace ltaudit {
namespace {

Network ZeroNetwork(const std::vector<LayerSpec>& layers) {
  std::vector<LayerParams> params;
  for (const auto& l : layers) {
    params.push_back({Tensor::Matrix(l.out_dim, l.in_dim), Tensor({l.out_dim})});
  }
  return Network(layers, params, params, 0);
}

Tensor RandomBatch(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t = Tensor::Matrix(rows, cols);
  for (double& v : t.data()) v = rng.Normal();
  return t;
}

TEST(TensorTest, RejectsDataThatDoesNotMatchShape) {
  EXPECT_THROW(Tensor({2, 3}, std::vector<double>(5)), InvalidArgument);
  EXPECT_THROW(Tensor({0, 3}), InvalidArgument);
  EXPECT_NO_THROW(Tensor({2, 3}, std::vector<double>(6)));
}

TEST(InitNetworkTest, SameSeedIsBitwiseIdentical) {
  const auto layers = MlpLayers(4, {8}, 3);
  EXPECT_EQ(InitNetwork(layers, 7), InitNetwork(layers, 7));
}

TEST(InitNetworkTest, DifferentSeedsDiffer) {
  const auto layers = MlpLayers(4, {8}, 3);
  EXPECT_NE(InitNetwork(layers, 7).params(), InitNetwork(layers, 8).params());
}

TEST(InitNetworkTest, ChainMismatchIsRejected) {
  const std::vector<LayerSpec> layers = {{4, 8, Activation::kRelu},
                                         {9, 2, Activation::kIdentity}};
  EXPECT_THROW(InitNetwork(layers, 1), InvalidArgument);
}

TEST(InitNetworkTest, FinalLayerMustBeIdentity) {
  const std::vector<LayerSpec> layers = {{4, 2, Activation::kRelu}};
  EXPECT_THROW(InitNetwork(layers, 1), InvalidArgument);
}

TEST(InitNetworkTest, WeightsWithinScaledUniformBoundAndBiasesZero) {
  const Network net = InitNetwork(MlpLayers(10, {30}, 5), 3);
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const auto& spec = net.layers()[l];
    const double limit = std::sqrt(6.0 / (spec.in_dim + spec.out_dim));
    for (double w : net.params()[l].weight.data()) EXPECT_LE(std::abs(w), limit);
    for (double b : net.params()[l].bias.data()) EXPECT_EQ(b, 0.0);
  }
  EXPECT_EQ(net.params(), net.init_snapshot());
  EXPECT_EQ(net.seed(), 3u);
}

TEST(ForwardTest, ZeroWeightsGiveZeroLogits) {
  const Network net = ZeroNetwork(MlpLayers(3, {5}, 4));
  const Tensor logits = Forward(net, RandomBatch(6, 3, 1));
  ASSERT_EQ(logits.shape(), (std::vector<std::size_t>{6, 4}));
  for (double v : logits.data()) EXPECT_EQ(v, 0.0);
}

TEST(ForwardTest, IdentityLayerReturnsInput) {
  Network net = ZeroNetwork({{3, 3, Activation::kIdentity}});
  for (std::size_t i = 0; i < 3; ++i) net.mutable_params()[0].weight.at(i, i) = 1.0;
  const Tensor x = RandomBatch(4, 3, 2);
  EXPECT_EQ(Forward(net, x), x);
}

TEST(ForwardTest, MatchesMatmulOracle) {
  const Network net = InitNetwork(MlpLayers(5, {7}, 3), 11);
  const Tensor x = RandomBatch(9, 5, 12);
  const Tensor logits = Forward(net, x);
  const auto expected = testing::ForwardOracle(net, x);
  for (std::size_t r = 0; r < 9; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_NEAR(logits.at(r, c), expected[r][c], 1e-12);
    }
  }
}

TEST(ForwardTest, ShapeMismatchThrows) {
  const Network net = InitNetwork(MlpLayers(5, {7}, 3), 11);
  EXPECT_THROW(Forward(net, RandomBatch(2, 4, 1)), InvalidArgument);
}

TEST(SoftmaxTest, ZeroRowIsUniform) {
  const Tensor p = SoftmaxConfidences(Tensor({1, 5}));
  for (double v : p.data()) EXPECT_DOUBLE_EQ(v, 0.2);
}

TEST(SoftmaxTest, LargeLogitDoesNotOverflow) {
  const Tensor p = SoftmaxConfidences(Tensor({1, 2}, {1000.0, 0.0}));
  EXPECT_TRUE(p.AllFinite());
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  EXPECT_GT(p[1], 0.0);
  EXPECT_LT(p[1], 1e-300);
}

TEST(SoftmaxTest, KnownValues) {
  // Direct evaluation of exp(z_i) / sum exp(z_j).
  const auto expected = testing::NaiveSoftmax({1.0, 2.0, 3.0});
  const Tensor p = SoftmaxConfidences(Tensor({1, 3}, {1.0, 2.0, 3.0}));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(p[i], expected[i], 1e-15);
  EXPECT_NEAR(p[0], 0.09003057, 1e-8);
  EXPECT_NEAR(p[1], 0.24472847, 1e-8);
  EXPECT_NEAR(p[2], 0.66524096, 1e-8);
}

TEST(SoftmaxTest, RowsSumToOneAndStayPositive) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    Tensor logits = Tensor::Matrix(4, 1 + rng.Below(30));
    for (double& v : logits.data()) v = rng.Uniform(-50.0, 50.0);
    const Tensor p = SoftmaxConfidences(logits);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      double total = 0.0;
      for (double v : p.row(r)) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
        total += v;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(ArgmaxTest, TiesGoToLowestIndex) {
  const Tensor scores({3, 3}, {1, 1, 0, 0, 2, 2, 5, 5, 5});
  EXPECT_EQ(ArgmaxRows(scores), (std::vector<int>{0, 1, 0}));
}

}  // namespace
}  // namespace ltaudit
