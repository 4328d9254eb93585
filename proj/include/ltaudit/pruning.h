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

#ifndef LTAUDIT_PRUNING_H_
#define LTAUDIT_PRUNING_H_

#include <vector>

#include "ltaudit/dataset.h"
#include "ltaudit/mask.h"
#include "ltaudit/network.h"
#include "ltaudit/train.h"

namespace ltaudit {

enum class PruneScope { kGlobal, kPerLayer };

const char* PruneScopeName(PruneScope scope);

struct PruneConfig {
  // Fraction of weights to remove, in [0, 1).
  double target_sparsity = 0.0;
  PruneScope scope = PruneScope::kGlobal;
  // Used for both the dense run and the retraining run. Its seed also seeds
  // the initial weights.
  TrainConfig train_cfg;

  void Validate() const;
};

// Result of one train -> prune -> rewind -> retrain cycle.
struct LotteryTicket {
  Mask mask;
  Network dense_net;      // trained dense weights
  Network rewound_net;    // mask applied to the initial weights
  Network retrained_net;  // rewound_net after masked retraining
  TrainReport dense_report;
  TrainReport ticket_report;
  double achieved_sparsity = 0.0;
  PruneConfig config;
};

// Zeros the floor(p * count) smallest-magnitude weights, counted over all
// weight matrices (global) or within each matrix (per layer). Equal
// magnitudes are pruned in flat index order, lowest first.
Mask MagnitudePrune(const Network& net, double p,
                    PruneScope scope = PruneScope::kGlobal);

// Copy of net with its weights restored to the initial snapshot.
Network ResetToInit(const Network& net);

// Initialize from cfg.train_cfg.seed, train, derive the mask from the trained
// weights, rewind to mask * w0 and retrain under the mask for the same number
// of iterations.
LotteryTicket OneShotPrune(const std::vector<LayerSpec>& layers,
                           const DataSplit& data, const PruneConfig& cfg);

// One ticket per sparsity. All tickets share w0 and the trained dense
// weights; only the mask and retraining differ. `base.target_sparsity` is
// ignored.
std::vector<LotteryTicket> SparsitySweep(const std::vector<LayerSpec>& layers,
                                         const DataSplit& data,
                                         const std::vector<double>& sparsities,
                                         const PruneConfig& base);

}  // namespace ltaudit

#endif  // LTAUDIT_PRUNING_H_
