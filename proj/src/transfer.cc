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

#include "ltaudit/transfer.h"

#include <optional>
#include <set>
#include <utility>

#include "ltaudit/errors.h"
#include "ltaudit/parallel.h"
#include "ltaudit/serialize.h"

namespace ltaudit {

std::vector<TransferTarget> TicketTargets(const std::vector<LotteryTicket>& tickets,
                                          const std::string& arch_label) {
  std::vector<TransferTarget> out;
  out.reserve(tickets.size());
  for (const auto& t : tickets) {
    out.push_back({arch_label + "_p" + FormatDouble(t.config.target_sparsity),
                   t.retrained_net});
  }
  return out;
}

std::size_t TransferMatrix::DiagonalDominanceCount() const {
  std::size_t count = 0;
  for (std::size_t t = 0; t < size(); ++t) {
    bool dominant = true;
    for (std::size_t s = 0; s < size(); ++s) {
      if (at(s, t).accuracy > at(t, t).accuracy) dominant = false;
    }
    count += dominant ? 1 : 0;
  }
  return count;
}

AttackMetrics TransferAttack(const AttackModel& attack, const Network& target,
                             const Dataset& members, const Dataset& nonmembers,
                             std::size_t n_per_side, std::uint64_t seed) {
  if (attack.class_count() != target.class_count()) {
    throw InvalidArgument("attack model expects " +
                          std::to_string(attack.class_count()) +
                          " classes but target has " +
                          std::to_string(target.class_count()));
  }
  const AttackSplit split = BuildAttackDataset(target, members, nonmembers,
                                               n_per_side, seed, attack.sort_confidences);
  AttackMetrics m = EvaluateAttack(attack, split.eval);
  m.seed = seed;
  return m;
}

TransferMatrix BuildTransferMatrix(const std::vector<TransferTarget>& targets,
                                   const Dataset& members, const Dataset& nonmembers,
                                   std::size_t n_per_side, const AttackConfig& cfg,
                                   std::uint64_t seed, std::size_t threads) {
  if (targets.empty()) throw InvalidArgument("transfer matrix needs a target");
  std::set<std::string> seen;
  for (const auto& t : targets) {
    if (!seen.insert(t.id).second) throw InvalidArgument("duplicate target id " + t.id);
    if (t.net.class_count() != targets.front().net.class_count()) {
      throw InvalidArgument("transfer targets must share a class count");
    }
  }
  const std::size_t n = targets.size();
  std::vector<AttackSplit> splits(n);
  ParallelFor(n, threads, [&](std::size_t i) {
    splits[i] = BuildAttackDataset(targets[i].net, members, nonmembers, n_per_side,
                                   seed, cfg.sort_confidences);
  });
  std::vector<std::optional<AttackModel>> trained(n);
  ParallelFor(n, threads,
              [&](std::size_t i) { trained[i] = TrainAttack(splits[i].train, cfg); });

  TransferMatrix matrix;
  for (const auto& t : targets) matrix.ids.push_back(t.id);
  matrix.cells.resize(n * n);
  ParallelFor(n * n, threads, [&](std::size_t cell) {
    const std::size_t s = cell / n;
    const std::size_t t = cell % n;
    AttackMetrics m = EvaluateAttack(*trained[s], splits[t].eval);
    m.seed = seed;
    matrix.cells[cell] = m;
  });
  return matrix;
}

TransferMatrix MeanTransferMatrix(std::span<const TransferMatrix> matrices) {
  if (matrices.empty()) throw InvalidArgument("no transfer matrices to average");
  TransferMatrix mean;
  mean.ids = matrices.front().ids;
  mean.cells.resize(mean.ids.size() * mean.ids.size());
  const double scale = 1.0 / static_cast<double>(matrices.size());
  for (const auto& m : matrices) {
    if (m.ids != mean.ids) throw InvalidArgument("transfer matrices differ in ids");
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
      AttackMetrics& dst = mean.cells[i];
      const AttackMetrics& src = m.cells[i];
      dst.accuracy += scale * src.accuracy;
      dst.precision += scale * src.precision;
      dst.recall += scale * src.recall;
      dst.n_eval += src.n_eval;
      dst.confusion.tp += src.confusion.tp;
      dst.confusion.fp += src.confusion.fp;
      dst.confusion.tn += src.confusion.tn;
      dst.confusion.fn += src.confusion.fn;
    }
  }
  return mean;
}

}  // namespace ltaudit
