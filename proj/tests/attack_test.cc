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

#include "ltaudit/attack.h"

#include <cmath>
#include <set>

#include "gtest/gtest.h"
#include "ltaudit/errors.h"
#include "ltaudit/rng.h"
#include "oracles.h"

namespace ltaudit {
namespace {

Network ZeroNetwork(std::size_t in, std::size_t k) {
  const auto layers = MlpLayers(in, {4}, k);
  std::vector<LayerParams> params;
  for (const auto& l : layers) {
    params.push_back({Tensor::Matrix(l.out_dim, l.in_dim), Tensor({l.out_dim})});
  }
  return Network(layers, params, params, 0);
}

AttackDataset MakeSet(const std::vector<std::vector<double>>& members,
                      const std::vector<std::vector<double>>& others, int k) {
  AttackDataset ds{{}, k, Split::kTrain};
  for (std::size_t i = 0; i < members.size(); ++i) ds.records.push_back({members[i], true, i});
  for (std::size_t i = 0; i < others.size(); ++i) ds.records.push_back({others[i], false, i});
  return ds;
}

std::vector<double> Dirichlet(Rng& rng, int k, double peak_index = -1, double peak = 0.0) {
  std::vector<double> v(k);
  double total = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.Uniform());
    total += x;
  }
  for (double& x : v) x /= total;
  if (peak_index >= 0) {
    for (double& x : v) x *= (1.0 - peak);
    v[static_cast<std::size_t>(peak_index)] += peak;
  }
  return v;
}

AttackConfig SmallAttack(std::uint64_t seed) {
  AttackConfig cfg;
  cfg.hidden_units = 100;
  cfg.train_cfg = {0.05, 0.9, 32, 800, seed, 0.0};
  return cfg;
}

TEST(MetricsTest, PerfectClassifier) {
  const auto m = MetricsFromPredictions(std::vector<int>{1, 1, 0, 0},
                                        std::vector<int>{1, 1, 0, 0});
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.n_eval, 4u);
}

TEST(MetricsTest, ConstantMemberClassifierOnBalancedSet) {
  const auto m = MetricsFromPredictions(std::vector<int>(10, 1),
                                        std::vector<int>{1, 1, 1, 1, 1, 0, 0, 0, 0, 0});
  EXPECT_EQ(m.accuracy, 0.5);
  EXPECT_EQ(m.precision, 0.5);
  EXPECT_EQ(m.recall, 1.0);
}

TEST(MetricsTest, NoPositivePredictionsGivesZeroPrecision) {
  const auto m = MetricsFromPredictions(std::vector<int>{0, 0}, std::vector<int>{1, 0});
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.accuracy, 0.5);
}

TEST(MetricsTest, MatchesBruteForceConfusionOracle) {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.Below(60);
    std::vector<int> pred(n), actual(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = static_cast<int>(rng.Below(2));
      actual[i] = static_cast<int>(rng.Below(2));
    }
    const auto m = MetricsFromPredictions(pred, actual);
    const auto o = testing::BruteForceMetrics(pred, actual);
    ASSERT_EQ(m.accuracy, o.accuracy);
    ASSERT_EQ(m.precision, o.precision);
    ASSERT_EQ(m.recall, o.recall);
    ASSERT_EQ(m.n_eval, n);
  }
}

class BuildAttackDatasetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    data_ = MakeSynthetic({4, 5, 60, 2.0, 3});
    target_ = std::make_unique<Network>(InitNetwork(MlpLayers(5, {16}, 4), 2));
    Train(*target_, data_.train, {0.05, 0.9, 20, 100, 1, 0.0});
  }
  DataSplit data_;
  std::unique_ptr<Network> target_;
};

TEST_F(BuildAttackDatasetTest, SplitsHalfAndHalf) {
  const AttackSplit s = BuildAttackDataset(*target_, data_.train, data_.test, 100, 5);
  EXPECT_EQ(s.train.size(), 100u);
  EXPECT_EQ(s.train.member_count(), 50u);
  EXPECT_EQ(s.eval.size(), 100u);
  EXPECT_EQ(s.eval.member_count(), 50u);
  EXPECT_EQ(s.train.class_count, 4);
  EXPECT_NO_THROW(s.train.Validate());
  EXPECT_NO_THROW(s.eval.Validate());
}

TEST_F(BuildAttackDatasetTest, OddCountStaysBalancedPerSplit) {
  const AttackSplit s = BuildAttackDataset(*target_, data_.train, data_.test, 7, 5);
  EXPECT_EQ(s.train.member_count() * 2, s.train.size());
  EXPECT_EQ(s.eval.member_count() * 2, s.eval.size());
  EXPECT_EQ(s.train.size() + s.eval.size(), 14u);
}

TEST_F(BuildAttackDatasetTest, DrawsAreDisjointAcrossSplits) {
  const AttackSplit s = BuildAttackDataset(*target_, data_.train, data_.test, 200, 9);
  std::set<std::pair<bool, std::size_t>> train_src, eval_src;
  for (const auto& r : s.train.records) {
    EXPECT_TRUE(train_src.insert({r.member, r.source_index}).second);
  }
  for (const auto& r : s.eval.records) {
    EXPECT_TRUE(eval_src.insert({r.member, r.source_index}).second);
    EXPECT_FALSE(train_src.contains({r.member, r.source_index}));
  }
}

TEST_F(BuildAttackDatasetTest, ConfidencesMatchForwardOracle) {
  const AttackSplit s = BuildAttackDataset(*target_, data_.train, data_.test, 30, 2);
  for (const auto* split : {&s.train, &s.eval}) {
    for (const auto& r : split->records) {
      const Dataset& src = r.member ? data_.train : data_.test;
      const Tensor row({1, src.dim()},
                       {src.features.row(r.source_index).begin(),
                        src.features.row(r.source_index).end()});
      const auto logits = testing::ForwardOracle(*target_, row)[0];
      const auto expected = testing::NaiveSoftmax(logits);
      for (std::size_t c = 0; c < expected.size(); ++c) {
        EXPECT_NEAR(r.confidences[c], expected[c], 1e-12);
      }
    }
  }
}

TEST_F(BuildAttackDatasetTest, ConstantTargetGivesIdenticalVectors) {
  const Network constant = ZeroNetwork(5, 4);
  const AttackSplit s = BuildAttackDataset(constant, data_.train, data_.test, 40, 1);
  for (const auto& r : s.train.records) {
    EXPECT_EQ(r.confidences, s.eval.records.front().confidences);
  }
}

TEST_F(BuildAttackDatasetTest, SortedVectorsAreDescending) {
  const AttackSplit s = BuildAttackDataset(*target_, data_.train, data_.test, 20, 1, true);
  for (const auto& r : s.train.records) {
    EXPECT_TRUE(std::is_sorted(r.confidences.rbegin(), r.confidences.rend()));
  }
}

TEST_F(BuildAttackDatasetTest, InsufficientSamplesRejected) {
  EXPECT_THROW(BuildAttackDataset(*target_, data_.train, data_.test, 241, 1),
               InvalidArgument);
  EXPECT_THROW(BuildAttackDataset(*target_, data_.train, data_.test, 1, 1),
               InvalidArgument);
}

TEST(AttackDatasetTest, UnbalancedSetRejected) {
  const AttackDataset ds = MakeSet({{0.5, 0.5}, {0.5, 0.5}}, {{0.5, 0.5}}, 2);
  EXPECT_THROW(ds.Validate(), InvalidArgument);
  EXPECT_THROW(TrainAttack(ds, SmallAttack(1)), InvalidArgument);
}

TEST(TrainAttackTest, SeparableByMaxConfidence) {
  const int k = 10;
  auto build = [&](std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<std::vector<double>> in, out;
    for (std::size_t i = 0; i < n; ++i) {
      in.push_back(Dirichlet(rng, k, static_cast<double>(rng.Below(k)), 0.99));
      out.push_back(Dirichlet(rng, k));
    }
    return MakeSet(in, out, k);
  };
  const AttackDataset train = build(1, 200);
  AttackDataset eval = build(2, 200);
  eval.split = Split::kTest;
  // Threshold oracle: max confidence >= 0.99 separates the sets perfectly.
  std::vector<int> threshold_pred, actual;
  for (const auto& r : eval.records) {
    threshold_pred.push_back(*std::max_element(r.confidences.begin(), r.confidences.end()) >= 0.99);
    actual.push_back(r.member);
  }
  ASSERT_EQ(MetricsFromPredictions(threshold_pred, actual).accuracy, 1.0);

  const AttackModel model = TrainAttack(train, SmallAttack(3));
  EXPECT_EQ(model.class_count(), static_cast<std::size_t>(k));
  EXPECT_GE(EvaluateAttack(model, eval).accuracy, 0.98);
}

TEST(TrainAttackTest, NoSignalGivesChance) {
  const int k = 10;
  std::vector<double> accs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    auto draw = [&](std::size_t n) {
      std::vector<std::vector<double>> v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(Dirichlet(rng, k));
      return v;
    };
    const AttackDataset train = MakeSet(draw(300), draw(300), k);
    const AttackDataset eval = MakeSet(draw(300), draw(300), k);
    accs.push_back(EvaluateAttack(TrainAttack(train, SmallAttack(seed)), eval).accuracy);
  }
  EXPECT_NEAR(Mean(accs), 0.5, 0.05);
}

TEST(TrainAttackTest, SameSeedSamePredictions) {
  Rng rng(4);
  std::vector<std::vector<double>> in, out;
  for (int i = 0; i < 50; ++i) {
    in.push_back(Dirichlet(rng, 3, 0, 0.5));
    out.push_back(Dirichlet(rng, 3));
  }
  const AttackDataset ds = MakeSet(in, out, 3);
  const AttackModel a = TrainAttack(ds, SmallAttack(8));
  const AttackModel b = TrainAttack(ds, SmallAttack(8));
  EXPECT_EQ(a.net, b.net);
  const Dataset d = ds.ToDataset();
  EXPECT_EQ(Predict(a.net, d.features), Predict(b.net, d.features));
}

TEST(EvaluateAttackTest, DimensionMismatchAndEmptyRejected) {
  const AttackDataset three = MakeSet({{0.2, 0.3, 0.5}}, {{0.3, 0.3, 0.4}}, 3);
  const AttackModel model = TrainAttack(three, SmallAttack(1));
  const AttackDataset two = MakeSet({{0.2, 0.8}}, {{0.5, 0.5}}, 2);
  EXPECT_THROW(EvaluateAttack(model, two), InvalidArgument);
  EXPECT_THROW(EvaluateAttack(model, AttackDataset{{}, 3, Split::kTest}), InvalidArgument);
}

TEST(AuditPairTest, ZeroSparsityTicketMatchesDenseAttack) {
  const DataSplit data = MakeSynthetic({5, 8, 40, 2.0, 6});
  const auto layers = MlpLayers(8, {32}, 5);
  const LotteryTicket t =
      OneShotPrune(layers, data, {0.0, PruneScope::kGlobal, {0.05, 0.9, 20, 200, 4, 0.0}});
  const PairedMetrics pm = AuditPair(t, data.train, data.test, 100, SmallAttack(2), 2);
  EXPECT_EQ(pm.dense.accuracy, pm.ticket.accuracy);
  EXPECT_EQ(pm.dense.n_eval, 100u);
  EXPECT_EQ(pm.dense.seed, 2u);
}

TEST(ClassCountSweepTest, ProducesOneRowPerClassCount) {
  ClassSweepConfig cfg;
  cfg.data = {2, 5, 20, 1.0, 0};
  cfg.hidden = {16};
  cfg.target_train = {0.05, 0.9, 10, 50, 0, 0.0};
  cfg.attack = SmallAttack(0);
  cfg.attack.train_cfg.iterations = 50;
  cfg.n_per_side = 30;
  cfg.seeds = {1, 2};
  const auto rows = ClassCountSweep({2, 3}, cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].class_count, 2);
  EXPECT_EQ(rows[1].per_seed.size(), 2u);
  EXPECT_EQ(rows[1].per_seed[0].n_eval, 30u);
  EXPECT_THROW(ClassCountSweep({3, 2}, cfg), InvalidArgument);
  EXPECT_THROW(ClassCountSweep({1, 2}, cfg), InvalidArgument);
  cfg.threads = 3;
  const auto parallel = ClassCountSweep({2, 3}, cfg);
  EXPECT_EQ(parallel[1].accuracy_mean, rows[1].accuracy_mean);
}

TEST(StatsTest, MeanAndSampleStd) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(Mean(v), 2.5);
  EXPECT_DOUBLE_EQ(SampleStd(v), std::sqrt(5.0 / 3.0));
  EXPECT_EQ(SampleStd(std::vector<double>{3}), 0.0);
}

}  // namespace
}  // namespace ltaudit
