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

#ifndef LTAUDIT_TRANSFER_H_
#define LTAUDIT_TRANSFER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ltaudit/attack.h"
#include "ltaudit/dataset.h"
#include "ltaudit/network.h"
#include "ltaudit/pruning.h"

namespace ltaudit {

// A network under attack, named by architecture and sparsity.
struct TransferTarget {
  std::string id;
  Network net;
};

// Targets for every ticket's retrained network, named "<arch>_p<sparsity>".
std::vector<TransferTarget> TicketTargets(const std::vector<LotteryTicket>& tickets,
                                          const std::string& arch_label);

// Square grid of attack results. Rows are sources (the network whose outputs
// trained the attack), columns are targets.
struct TransferMatrix {
  std::vector<std::string> ids;
  std::vector<AttackMetrics> cells;  // row-major, ids.size()^2 entries

  std::size_t size() const { return ids.size(); }
  const AttackMetrics& at(std::size_t source, std::size_t target) const {
    return cells[source * ids.size() + target];
  }
  AttackMetrics& at(std::size_t source, std::size_t target) {
    return cells[source * ids.size() + target];
  }

  // Columns whose diagonal accuracy is at least every other accuracy in that
  // column.
  std::size_t DiagonalDominanceCount() const;
};

// Scores an existing attack model on a fresh split drawn from `target`; only
// the eval half of that split is used. The target is never trained on.
AttackMetrics TransferAttack(const AttackModel& attack, const Network& target,
                             const Dataset& members, const Dataset& nonmembers,
                             std::size_t n_per_side, std::uint64_t seed);

// One attack per source, trained on the train half of that source's split;
// every cell is scored on the eval half of the target's split for the same
// seed, so the samples behind a cell never overlap its attack's training
// samples.
TransferMatrix BuildTransferMatrix(const std::vector<TransferTarget>& targets,
                                   const Dataset& members, const Dataset& nonmembers,
                                   std::size_t n_per_side, const AttackConfig& cfg,
                                   std::uint64_t seed, std::size_t threads = 1);

// Cell-wise mean of accuracy, precision and recall over matrices with
// identical ids. Confusion counts are summed.
TransferMatrix MeanTransferMatrix(std::span<const TransferMatrix> matrices);

}  // namespace ltaudit

#endif  // LTAUDIT_TRANSFER_H_
