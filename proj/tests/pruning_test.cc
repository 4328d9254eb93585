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

#include "ltaudit/pruning.h"

#include <cmath>

#include "gtest/gtest.h"
#include "ltaudit/errors.h"
#include "ltaudit/rng.h"

namespace ltaudit {
namespace {

// Single 1 x n identity-activation layer carrying the given weights.
Network RowNetwork(const std::vector<double>& weights) {
  const std::vector<LayerSpec> layers = {{weights.size(), 1, Activation::kIdentity}};
  std::vector<LayerParams> params = {
      {Tensor({1, weights.size()}, weights), Tensor({1})}};
  return Network(layers, params, params, 0);
}

std::vector<double> Flat(const Mask& m) {
  std::vector<double> out;
  for (const auto& t : m.layers) out.insert(out.end(), t.data().begin(), t.data().end());
  return out;
}

Network RandomNetwork(std::uint64_t seed, std::size_t in = 10, std::size_t hidden = 50,
                      std::size_t out = 10) {
  // 10*50 + 50*10 = 1000 weights with the defaults.
  return InitNetwork(MlpLayers(in, {hidden}, out), seed);
}

DataSplit Blobs(int k, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.class_count = k;
  spec.dim = 10;
  spec.n_per_class = 30;
  spec.cluster_sep = 5.0;
  spec.seed = seed;
  return MakeSynthetic(spec);
}

TEST(MagnitudePruneTest, ZeroSparsityKeepsEverything) {
  const Network net = RandomNetwork(1);
  EXPECT_EQ(MagnitudePrune(net, 0.0), Mask::Ones(net));
}

TEST(MagnitudePruneTest, PrunesSmallestMagnitudes) {
  const Mask m = MagnitudePrune(RowNetwork({0.1, -0.5, 0.3, 0.05}), 0.5);
  EXPECT_EQ(Flat(m), (std::vector<double>{0, 1, 1, 0}));
}

TEST(MagnitudePruneTest, TiesBrokenByLowerIndex) {
  const Mask m = MagnitudePrune(RowNetwork({0.2, -0.2, 0.7}), 1.0 / 3.0);
  EXPECT_EQ(Flat(m), (std::vector<double>{0, 1, 1}));
}

TEST(MagnitudePruneTest, RejectsFullOrNegativeSparsity) {
  const Network net = RandomNetwork(1);
  EXPECT_THROW(MagnitudePrune(net, 1.0), InvalidArgument);
  EXPECT_THROW(MagnitudePrune(net, 1.5), InvalidArgument);
  EXPECT_THROW(MagnitudePrune(net, -0.1), InvalidArgument);
}

TEST(MagnitudePruneTest, GlobalZeroCountIsExactForRandomNetworks) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const Network net = RandomNetwork(seed, 1 + rng.Below(12), 1 + rng.Below(40),
                                      2 + rng.Below(6));
    const double p = rng.Uniform(0.0, 0.999);
    const Mask m = MagnitudePrune(net, p);
    EXPECT_EQ(m.zero_count(),
              static_cast<std::size_t>(std::floor(p * static_cast<double>(net.weight_count()))));
    // Every pruned magnitude is <= every surviving magnitude.
    double max_pruned = 0.0;
    double min_kept = INFINITY;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
      for (std::size_t i = 0; i < m.layers[l].size(); ++i) {
        const double a = std::abs(net.params()[l].weight[i]);
        if (m.layers[l][i] == 0.0) {
          max_pruned = std::max(max_pruned, a);
        } else {
          min_kept = std::min(min_kept, a);
        }
      }
    }
    EXPECT_LE(max_pruned, min_kept);
  }
}

TEST(MagnitudePruneTest, PerLayerScopeCountsEachMatrix) {
  const Network net = InitNetwork(MlpLayers(7, {13}, 3), 4);
  const double p = 0.37;
  const Mask m = MagnitudePrune(net, p, PruneScope::kPerLayer);
  for (const auto& t : m.layers) {
    std::size_t zeros = 0;
    for (double v : t.data()) zeros += v == 0.0;
    EXPECT_EQ(zeros, static_cast<std::size_t>(std::floor(p * t.size())));
  }
}

TEST(MagnitudePruneTest, MasksAreNestedAcrossSparsities) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Network net = RandomNetwork(seed);
    const std::vector<double> ps = {0.2, 0.5, 0.8, 0.95};
    for (std::size_t i = 1; i < ps.size(); ++i) {
      const auto lo = Flat(MagnitudePrune(net, ps[i - 1]));
      const auto hi = Flat(MagnitudePrune(net, ps[i]));
      for (std::size_t j = 0; j < lo.size(); ++j) {
        if (lo[j] == 0.0) {
          ASSERT_EQ(hi[j], 0.0);
        }
      }
    }
  }
}

TEST(MagnitudePruneTest, NestingHoldsWithHeavyTies) {
  Rng rng(3);
  std::vector<double> w(200);
  for (double& v : w) v = (rng.Below(5) - 2.0) * 0.25;  // five distinct values
  const Network net = RowNetwork(w);
  const auto lo = Flat(MagnitudePrune(net, 0.3));
  const auto hi = Flat(MagnitudePrune(net, 0.6));
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (lo[j] == 0.0) {
      ASSERT_EQ(hi[j], 0.0);
    }
  }
}

TEST(ResetToInitTest, FreshNetworkIsUnchanged) {
  const Network net = RandomNetwork(2);
  EXPECT_EQ(ResetToInit(net), net);
}

TEST(ResetToInitTest, TrainedNetworkReturnsToSnapshot) {
  const DataSplit data = Blobs(10, 1);
  Network net = RandomNetwork(2);
  Train(net, data.train, {0.05, 0.9, 20, 30, 1, 0.0});
  ASSERT_NE(net.params(), net.init_snapshot());
  const Network reset = ResetToInit(net);
  EXPECT_EQ(reset.params(), net.init_snapshot());
  EXPECT_EQ(reset.init_snapshot(), net.init_snapshot());
}

TEST(ResetToInitTest, RetrainAfterResetReproducesFirstRun) {
  const DataSplit data = Blobs(10, 1);
  const TrainConfig cfg{0.05, 0.9, 20, 40, 1, 0.0};
  Network first = RandomNetwork(2);
  Train(first, data.train, cfg);
  Network again = ResetToInit(first);
  Train(again, data.train, cfg);
  EXPECT_EQ(again.params(), first.params());
}

TEST(OneShotPruneTest, AchievesExactSparsityAndKeepsPrunedWeightsZero) {
  const DataSplit data = Blobs(10, 4);
  const auto layers = MlpLayers(10, {50}, 10);
  const PruneConfig cfg{0.8, PruneScope::kGlobal, {0.05, 0.9, 30, 60, 3, 0.0}};
  const LotteryTicket t = OneShotPrune(layers, data, cfg);
  EXPECT_EQ(t.mask.size(), 1000u);
  EXPECT_EQ(t.mask.zero_count(), 800u);
  EXPECT_DOUBLE_EQ(t.achieved_sparsity, 0.8);
  for (std::size_t l = 0; l < t.mask.layers.size(); ++l) {
    for (std::size_t i = 0; i < t.mask.layers[l].size(); ++i) {
      const bool kept = t.mask.layers[l][i] == 1.0;
      const double w0 = t.dense_net.init_snapshot()[l].weight[i];
      EXPECT_EQ(t.rewound_net.params()[l].weight[i], kept ? w0 : 0.0);
      if (!kept) {
        EXPECT_EQ(t.retrained_net.params()[l].weight[i], 0.0);
      }
    }
  }
  // Biases are rewound too.
  for (std::size_t l = 0; l < t.mask.layers.size(); ++l) {
    EXPECT_EQ(t.rewound_net.params()[l].bias, t.dense_net.init_snapshot()[l].bias);
  }
  EXPECT_EQ(t.mask, MagnitudePrune(t.dense_net, 0.8));
  EXPECT_EQ(t.dense_report.iterations, t.ticket_report.iterations);
}

TEST(OneShotPruneTest, ZeroSparsityEqualsPlainRetrainFromInit) {
  const DataSplit data = Blobs(5, 2);
  const auto layers = MlpLayers(10, {20}, 5);
  const TrainConfig tc{0.05, 0.9, 25, 50, 8, 0.0};
  const LotteryTicket t = OneShotPrune(layers, data, {0.0, PruneScope::kGlobal, tc});
  Network plain = InitNetwork(layers, tc.seed);
  Train(plain, data.train, tc);
  EXPECT_EQ(t.retrained_net.params(), plain.params());
  EXPECT_EQ(t.dense_net.params(), plain.params());
}

TEST(SparsitySweepTest, SingleZeroEntryMatchesOneShot) {
  const DataSplit data = Blobs(5, 2);
  const auto layers = MlpLayers(10, {20}, 5);
  const PruneConfig cfg{0.0, PruneScope::kGlobal, {0.05, 0.9, 25, 30, 8, 0.0}};
  const auto sweep = SparsitySweep(layers, data, {0.0}, cfg);
  ASSERT_EQ(sweep.size(), 1u);
  const LotteryTicket single = OneShotPrune(layers, data, cfg);
  EXPECT_EQ(sweep[0].retrained_net, single.retrained_net);
  EXPECT_EQ(sweep[0].mask, single.mask);
}

TEST(SparsitySweepTest, SharesInitAndNestsMasks) {
  const DataSplit data = Blobs(10, 2);
  const auto layers = MlpLayers(10, {50}, 10);
  const PruneConfig cfg{0.0, PruneScope::kGlobal, {0.05, 0.9, 30, 40, 8, 0.0}};
  const auto sweep = SparsitySweep(layers, data, {0.2, 0.5, 0.8, 0.95}, cfg);
  ASSERT_EQ(sweep.size(), 4u);
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    EXPECT_EQ(sweep[i].dense_net, sweep[0].dense_net);
    EXPECT_EQ(sweep[i].mask.zero_count(),
              static_cast<std::size_t>(std::floor(sweep[i].config.target_sparsity * 1000)));
    if (i == 0) continue;
    const auto lo = Flat(sweep[i - 1].mask);
    const auto hi = Flat(sweep[i].mask);
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (lo[j] == 0.0) {
        ASSERT_EQ(hi[j], 0.0);
      }
    }
  }
}

TEST(SparsitySweepTest, RejectsBadLists) {
  const DataSplit data = Blobs(3, 2);
  const auto layers = MlpLayers(10, {5}, 3);
  const PruneConfig cfg{0.0, PruneScope::kGlobal, {0.05, 0.9, 10, 5, 8, 0.0}};
  EXPECT_THROW(SparsitySweep(layers, data, {}, cfg), InvalidArgument);
  EXPECT_THROW(SparsitySweep(layers, data, {0.5, 0.2}, cfg), InvalidArgument);
  EXPECT_THROW(SparsitySweep(layers, data, {0.5, 1.0}, cfg), InvalidArgument);
}

}  // namespace
}  // namespace ltaudit
