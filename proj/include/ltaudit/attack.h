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

#ifndef LTAUDIT_ATTACK_H_
#define LTAUDIT_ATTACK_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ltaudit/dataset.h"
#include "ltaudit/network.h"
#include "ltaudit/pruning.h"
#include "ltaudit/train.h"

namespace ltaudit {

// Softmax output of the target on one sample, labelled with membership.
struct ConfidenceRecord {
  std::vector<double> confidences;
  bool member = false;
  // Row of the sample in the member or non-member dataset it came from.
  std::size_t source_index = 0;
};

struct AttackDataset {
  std::vector<ConfidenceRecord> records;
  int class_count = 0;
  Split split = Split::kTrain;

  std::size_t size() const { return records.size(); }
  std::size_t member_count() const;

  // Throws InvalidArgument unless the set is balanced and every record is a
  // probability vector of length class_count.
  void Validate() const;

  // Confidences as features, membership (1 = member) as a 2-class label.
  Dataset ToDataset() const;
};

struct AttackSplit {
  AttackDataset train;
  AttackDataset eval;
};

struct AttackConfig {
  std::size_t hidden_units = 100;
  TrainConfig train_cfg{0.05, 0.9, 32, 2000, 0, 0.0};
  // Sort each confidence vector in descending order before use.
  bool sort_confidences = false;
};

// Two-class MLP over confidence vectors.
struct AttackModel {
  Network net;
  TrainConfig train_cfg;
  bool sort_confidences = false;

  std::size_t class_count() const { return net.input_dim(); }
};

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// "Positive" means member. Precision is 0 when nothing is predicted
// positive; recall is 0 when there are no positives.
struct AttackMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t n_eval = 0;
  ConfusionMatrix confusion;
  std::uint64_t seed = 0;
};

AttackMetrics MetricsFromConfusion(const ConfusionMatrix& cm);

// predicted and actual hold 0/1 membership labels.
AttackMetrics MetricsFromPredictions(std::span<const int> predicted,
                                     std::span<const int> actual);

// Draws n_per_side members and n_per_side non-members without replacement,
// runs them through the target and splits each side in half: the first
// n_per_side / 2 draws of each side form the train split, the rest the eval
// split.
AttackSplit BuildAttackDataset(const Network& target, const Dataset& members,
                               const Dataset& nonmembers, std::size_t n_per_side,
                               std::uint64_t seed, bool sort_confidences = false);

// Batch size is capped at the training set size.
AttackModel TrainAttack(const AttackDataset& train_set, const AttackConfig& cfg);

AttackMetrics EvaluateAttack(const AttackModel& model,
                             const AttackDataset& eval_set);

// Builds the split from `target`, trains an attack on it and scores it on
// the held-out half.
AttackMetrics AttackNetwork(const Network& target, const Dataset& members,
                            const Dataset& nonmembers, std::size_t n_per_side,
                            const AttackConfig& cfg, std::uint64_t seed);

struct PairedMetrics {
  AttackMetrics dense;
  AttackMetrics ticket;
};

// Attacks the dense and the retrained ticket network with the same sample
// draw.
PairedMetrics AuditPair(const LotteryTicket& ticket, const Dataset& members,
                        const Dataset& nonmembers, std::size_t n_per_side,
                        const AttackConfig& cfg, std::uint64_t seed);

struct ClassSweepConfig {
  // class_count and seed are overwritten for each run.
  SyntheticSpec data;
  std::vector<std::size_t> hidden{128};
  TrainConfig target_train;
  AttackConfig attack;
  // Capped at the number of available members.
  std::size_t n_per_side = 200;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t threads = 1;
};

struct ClassSweepRow {
  int class_count = 0;
  std::vector<AttackMetrics> per_seed;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;  // sample standard deviation
  double target_train_acc = 0.0;  // means over seeds
  double target_test_acc = 0.0;
};

// For each k and seed: synthetic data, a dense target trained on the train
// split, and an attack with the train split as members and the test split as
// non-members.
std::vector<ClassSweepRow> ClassCountSweep(const std::vector<int>& class_counts,
                                           const ClassSweepConfig& cfg);

double Mean(std::span<const double> values);
// Sample standard deviation; 0 for fewer than two values.
double SampleStd(std::span<const double> values);

// Documentation constants: reported attack accuracies at full scale
// (ResNet18). Not reproduced by anything in this library.
namespace reference {
inline constexpr double kCifar10DenseAccuracy = 0.503;
inline constexpr double kCifar100DenseAccuracy = 0.744;
inline constexpr double kImagenet20kDenseAccuracy = 0.944;
inline constexpr double kCifar100TicketAccuracy = 0.744;
}  // namespace reference

}  // namespace ltaudit

#endif  // LTAUDIT_ATTACK_H_
