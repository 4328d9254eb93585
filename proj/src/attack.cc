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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

#include "ltaudit/errors.h"
#include "ltaudit/parallel.h"
#include "ltaudit/rng.h"

namespace ltaudit {
namespace {

constexpr double kProbabilitySumTolerance = 1e-9;

std::vector<std::size_t> DrawWithoutReplacement(std::size_t population,
                                                std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.Shuffle(std::span<std::size_t>(idx));
  idx.resize(n);
  return idx;
}

std::vector<ConfidenceRecord> Confidences(const Network& target,
                                          const Dataset& source,
                                          std::span<const std::size_t> rows,
                                          bool member, bool sort) {
  const Tensor probs = SoftmaxConfidences(Forward(target, source.Select(rows).features));
  std::vector<ConfidenceRecord> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = probs.row(i);
    ConfidenceRecord rec{{row.begin(), row.end()}, member, rows[i]};
    if (sort) {
      std::sort(rec.confidences.begin(), rec.confidences.end(), std::greater<>());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::size_t AttackDataset::member_count() const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [](const auto& r) { return r.member; }));
}

void AttackDataset::Validate() const {
  if (class_count < 1) throw InvalidArgument("attack dataset has no classes");
  if (member_count() * 2 != records.size()) {
    throw InvalidArgument("attack dataset is not balanced: " +
                          std::to_string(member_count()) + " members of " +
                          std::to_string(records.size()));
  }
  for (const auto& r : records) {
    if (r.confidences.size() != static_cast<std::size_t>(class_count)) {
      throw InvalidArgument("confidence vector length differs from class count");
    }
    const double sum = std::accumulate(r.confidences.begin(), r.confidences.end(), 0.0);
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      throw InvalidArgument("confidence vector does not sum to 1");
    }
  }
}

Dataset AttackDataset::ToDataset() const {
  Dataset ds;
  ds.class_count = 2;
  ds.split = split;
  if (records.empty()) return ds;
  ds.features = Tensor::Matrix(records.size(), static_cast<std::size_t>(class_count));
  ds.labels.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::copy(records[i].confidences.begin(), records[i].confidences.end(),
              ds.features.row(i).begin());
    ds.labels.push_back(records[i].member ? 1 : 0);
  }
  return ds;
}

AttackMetrics MetricsFromConfusion(const ConfusionMatrix& cm) {
  AttackMetrics m;
  m.confusion = cm;
  m.n_eval = cm.tp + cm.fp + cm.tn + cm.fn;
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(cm.tp + cm.tn, m.n_eval);
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  return m;
}

AttackMetrics MetricsFromPredictions(std::span<const int> predicted,
                                     std::span<const int> actual) {
  if (predicted.size() != actual.size()) {
    throw InvalidArgument("prediction and label counts differ");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == 1;
    const bool a = actual[i] == 1;
    if (p && a) {
      ++cm.tp;
    } else if (p) {
      ++cm.fp;
    } else if (a) {
      ++cm.fn;
    } else {
      ++cm.tn;
    }
  }
  return MetricsFromConfusion(cm);
}

AttackSplit BuildAttackDataset(const Network& target, const Dataset& members,
                               const Dataset& nonmembers, std::size_t n_per_side,
                               std::uint64_t seed, bool sort_confidences) {
  if (n_per_side < 2) throw InvalidArgument("n_per_side must be at least 2");
  if (n_per_side > members.size() || n_per_side > nonmembers.size()) {
    throw InvalidArgument("n_per_side " + std::to_string(n_per_side) +
                          " exceeds available samples (" +
                          std::to_string(members.size()) + " members, " +
                          std::to_string(nonmembers.size()) + " non-members)");
  }
  Rng rng = Rng::Stream(seed, rng_stream::kAttackDraw);
  const auto member_rows = DrawWithoutReplacement(members.size(), n_per_side, rng);
  const auto nonmember_rows =
      DrawWithoutReplacement(nonmembers.size(), n_per_side, rng);
  auto in = Confidences(target, members, member_rows, true, sort_confidences);
  auto out = Confidences(target, nonmembers, nonmember_rows, false, sort_confidences);

  const std::size_t half = n_per_side / 2;
  AttackSplit split;
  const int k = static_cast<int>(target.class_count());
  split.train = {{}, k, Split::kTrain};
  split.eval = {{}, k, Split::kTest};
  for (std::size_t i = 0; i < n_per_side; ++i) {
    auto& dst = i < half ? split.train.records : split.eval.records;
    dst.push_back(std::move(in[i]));
    dst.push_back(std::move(out[i]));
  }
  return split;
}

AttackModel TrainAttack(const AttackDataset& train_set, const AttackConfig& cfg) {
  if (train_set.records.empty()) throw InvalidArgument("attack training set is empty");
  train_set.Validate();
  if (cfg.hidden_units == 0) throw InvalidArgument("attack hidden_units must be positive");
  const Dataset ds = train_set.ToDataset();
  TrainConfig tc = cfg.train_cfg;
  tc.batch_size = std::min(tc.batch_size, ds.size());
  Network net = InitNetwork(
      MlpLayers(static_cast<std::size_t>(train_set.class_count), {cfg.hidden_units}, 2),
      tc.seed);
  Train(net, ds, tc);
  return AttackModel{std::move(net), tc, cfg.sort_confidences};
}

AttackMetrics EvaluateAttack(const AttackModel& model, const AttackDataset& eval_set) {
  if (eval_set.records.empty()) throw InvalidArgument("attack eval set is empty");
  eval_set.Validate();
  if (static_cast<std::size_t>(eval_set.class_count) != model.class_count()) {
    throw InvalidArgument("attack model expects " +
                          std::to_string(model.class_count()) +
                          " confidences, eval set has " +
                          std::to_string(eval_set.class_count));
  }
  const Dataset ds = eval_set.ToDataset();
  return MetricsFromPredictions(Predict(model.net, ds.features), ds.labels);
}

AttackMetrics AttackNetwork(const Network& target, const Dataset& members,
                            const Dataset& nonmembers, std::size_t n_per_side,
                            const AttackConfig& cfg, std::uint64_t seed) {
  const AttackSplit split = BuildAttackDataset(target, members, nonmembers,
                                               n_per_side, seed, cfg.sort_confidences);
  AttackMetrics m = EvaluateAttack(TrainAttack(split.train, cfg), split.eval);
  m.seed = seed;
  return m;
}

PairedMetrics AuditPair(const LotteryTicket& ticket, const Dataset& members,
                        const Dataset& nonmembers, std::size_t n_per_side,
                        const AttackConfig& cfg, std::uint64_t seed) {
  return {AttackNetwork(ticket.dense_net, members, nonmembers, n_per_side, cfg, seed),
          AttackNetwork(ticket.retrained_net, members, nonmembers, n_per_side, cfg,
                        seed)};
}

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double SampleStd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::vector<ClassSweepRow> ClassCountSweep(const std::vector<int>& class_counts,
                                           const ClassSweepConfig& cfg) {
  if (class_counts.empty()) throw InvalidArgument("class count list is empty");
  for (std::size_t i = 0; i < class_counts.size(); ++i) {
    if (class_counts[i] < 2) throw InvalidArgument("class counts must be >= 2");
    if (i > 0 && class_counts[i] <= class_counts[i - 1]) {
      throw InvalidArgument("class counts must be strictly increasing");
    }
  }
  if (cfg.seeds.empty()) throw InvalidArgument("seed list is empty");

  struct Run {
    AttackMetrics metrics;
    double train_acc = 0.0;
    double test_acc = 0.0;
  };
  const std::size_t n_seeds = cfg.seeds.size();
  std::vector<Run> runs(class_counts.size() * n_seeds);
  ParallelFor(runs.size(), cfg.threads, [&](std::size_t job) {
    const int k = class_counts[job / n_seeds];
    const std::uint64_t seed = cfg.seeds[job % n_seeds];
    SyntheticSpec spec = cfg.data;
    spec.class_count = k;
    spec.seed = seed;
    const DataSplit data = MakeSynthetic(spec);
    TrainConfig tc = cfg.target_train;
    tc.seed = seed;
    Network target = InitNetwork(MlpLayers(spec.dim, cfg.hidden, k), seed);
    const TrainReport report = Train(target, data.train, tc, nullptr, &data.test);
    AttackConfig ac = cfg.attack;
    ac.train_cfg.seed = seed;
    const std::size_t n = std::min({cfg.n_per_side, data.train.size(), data.test.size()});
    runs[job] = {AttackNetwork(target, data.train, data.test, n, ac, seed),
                 report.train_accuracy, report.test_accuracy.value_or(0.0)};
  });

  std::vector<ClassSweepRow> rows;
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    ClassSweepRow row;
    row.class_count = class_counts[c];
    std::vector<double> acc, train_acc, test_acc;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const Run& r = runs[c * n_seeds + s];
      row.per_seed.push_back(r.metrics);
      acc.push_back(r.metrics.accuracy);
      train_acc.push_back(r.train_acc);
      test_acc.push_back(r.test_acc);
    }
    row.accuracy_mean = Mean(acc);
    row.accuracy_std = SampleStd(acc);
    row.target_train_acc = Mean(train_acc);
    row.target_test_acc = Mean(test_acc);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ltaudit
