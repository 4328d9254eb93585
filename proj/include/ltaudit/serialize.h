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

#ifndef LTAUDIT_SERIALIZE_H_
#define LTAUDIT_SERIALIZE_H_

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ltaudit/attack.h"
#include "ltaudit/network.h"
#include "ltaudit/pruning.h"
#include "ltaudit/train.h"
#include "ltaudit/transfer.h"

namespace ltaudit {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double v);

// {"format": 1, "seed", "layers": [{kind, in_dim, out_dim, activation}],
//  "weights": [{"weight": [...], "bias": [...]}], "init_snapshot": [...]}
Json NetworkToJson(const Network& net);
Network NetworkFromJson(const Json& doc);

Json MaskToJson(const Mask& mask);
Mask MaskFromJson(const Json& doc, const Network& net);

Json TrainConfigToJson(const TrainConfig& cfg);
TrainConfig TrainConfigFromJson(const Json& doc);
Json TrainReportToJson(const TrainReport& report);
TrainReport TrainReportFromJson(const Json& doc);
Json PruneConfigToJson(const PruneConfig& cfg);
PruneConfig PruneConfigFromJson(const Json& doc);

// Dense and ticket network documents, the rewound network, the mask arrays,
// the prune config and both train reports.
Json TicketToJson(const LotteryTicket& ticket);
LotteryTicket TicketFromJson(const Json& doc);

// {accuracy, precision, recall, n_eval, seed}
Json MetricsToJson(const AttackMetrics& m);

Json TransferMatrixToJson(const TransferMatrix& matrix);

// Header "c0,...,c{k-1},member".
void WriteAttackDatasetCsv(std::ostream& out, const AttackDataset& ds);

// Header "sparsity,dense_train_acc,dense_test_acc,ticket_train_acc,ticket_test_acc".
void WriteSweepCsv(std::ostream& out, const std::vector<LotteryTicket>& tickets);

// Header "source_id,target_id,accuracy,precision,recall".
void WriteTransferCsv(std::ostream& out, const TransferMatrix& matrix);

// Throws IoError on failure.
void WriteTextFile(const std::string& path, const std::string& contents);
std::string ReadTextFile(const std::string& path);

}  // namespace ltaudit

#endif  // LTAUDIT_SERIALIZE_H_
