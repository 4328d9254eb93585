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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "ltaudit/errors.h"

namespace ltaudit {
namespace {

void CheckSparsity(double p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw InvalidArgument("sparsity must lie in [0, 1), got " +
                          std::to_string(p));
  }
}

// Zeros the `count` smallest |w| among `magnitudes`, writing into the mask
// slots in the same order. Stable sort keeps ties in index order.
void PruneSmallest(const std::vector<double>& magnitudes, std::size_t count,
                   const std::vector<double*>& slots) {
  std::vector<std::size_t> order(magnitudes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return magnitudes[a] < magnitudes[b];
  });
  for (std::size_t i = 0; i < count; ++i) *slots[order[i]] = 0.0;
}

std::size_t PruneCount(double p, std::size_t n) {
  return static_cast<std::size_t>(std::floor(p * static_cast<double>(n)));
}

void ValidateData(const DataSplit& data) {
  data.train.Validate();
  if (!data.test.empty()) data.test.Validate();
}

LotteryTicket RetrainTicket(const Network& dense, const TrainReport& dense_report,
                            const DataSplit& data, const PruneConfig& cfg) {
  Mask mask = MagnitudePrune(dense, cfg.target_sparsity, cfg.scope);
  Network rewound = ResetToInit(dense);
  ApplyMask(mask, rewound.mutable_params());
  Network retrained = rewound;
  const Dataset* test = data.test.empty() ? nullptr : &data.test;
  TrainReport ticket_report = Train(retrained, data.train, cfg.train_cfg, &mask, test);
  const double achieved = mask.sparsity();
  return LotteryTicket{std::move(mask),          dense,
                       std::move(rewound),       std::move(retrained),
                       dense_report,             std::move(ticket_report),
                       achieved,                 cfg};
}

}  // namespace

const char* PruneScopeName(PruneScope scope) {
  return scope == PruneScope::kGlobal ? "global" : "per_layer";
}

void PruneConfig::Validate() const {
  CheckSparsity(target_sparsity);
  train_cfg.Validate();
}

Mask MagnitudePrune(const Network& net, double p, PruneScope scope) {
  CheckSparsity(p);
  Mask mask = Mask::Ones(net);
  if (scope == PruneScope::kGlobal) {
    std::vector<double> magnitudes;
    std::vector<double*> slots;
    magnitudes.reserve(net.weight_count());
    slots.reserve(net.weight_count());
    for (std::size_t l = 0; l < mask.layers.size(); ++l) {
      const auto& w = net.params()[l].weight;
      for (std::size_t i = 0; i < w.size(); ++i) {
        magnitudes.push_back(std::abs(w[i]));
        slots.push_back(&mask.layers[l][i]);
      }
    }
    PruneSmallest(magnitudes, PruneCount(p, magnitudes.size()), slots);
  } else {
    for (std::size_t l = 0; l < mask.layers.size(); ++l) {
      const auto& w = net.params()[l].weight;
      std::vector<double> magnitudes(w.size());
      std::vector<double*> slots(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        magnitudes[i] = std::abs(w[i]);
        slots[i] = &mask.layers[l][i];
      }
      PruneSmallest(magnitudes, PruneCount(p, w.size()), slots);
    }
  }
  return mask;
}

Network ResetToInit(const Network& net) {
  return net.WithParams(net.init_snapshot());
}

LotteryTicket OneShotPrune(const std::vector<LayerSpec>& layers,
                           const DataSplit& data, const PruneConfig& cfg) {
  return SparsitySweep(layers, data, {cfg.target_sparsity}, cfg).front();
}

std::vector<LotteryTicket> SparsitySweep(const std::vector<LayerSpec>& layers,
                                         const DataSplit& data,
                                         const std::vector<double>& sparsities,
                                         const PruneConfig& base) {
  if (sparsities.empty()) throw InvalidArgument("sparsity list is empty");
  for (std::size_t i = 0; i < sparsities.size(); ++i) {
    CheckSparsity(sparsities[i]);
    if (i > 0 && !(sparsities[i] > sparsities[i - 1])) {
      throw InvalidArgument("sparsities must be strictly increasing");
    }
  }
  base.train_cfg.Validate();
  ValidateData(data);
  const Dataset* test = data.test.empty() ? nullptr : &data.test;

  Network dense = InitNetwork(layers, base.train_cfg.seed);
  const TrainReport dense_report =
      Train(dense, data.train, base.train_cfg, nullptr, test);

  std::vector<LotteryTicket> tickets;
  tickets.reserve(sparsities.size());
  for (double p : sparsities) {
    PruneConfig cfg = base;
    cfg.target_sparsity = p;
    tickets.push_back(RetrainTicket(dense, dense_report, data, cfg));
  }
  return tickets;
}

}  // namespace ltaudit
