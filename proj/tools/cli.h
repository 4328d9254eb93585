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

#ifndef LTAUDIT_TOOLS_CLI_H_
#define LTAUDIT_TOOLS_CLI_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ltaudit/dataset.h"
#include "ltaudit/errors.h"
#include "ltaudit/pruning.h"
#include "ltaudit/serialize.h"
#include "ltaudit/train.h"

namespace ltaudit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct DatasetConfig {
  Provenance source = Provenance::kSynthetic;
  SyntheticSpec synthetic;  // seed comes from ExperimentConfig::seed
  std::string train_images, train_labels, test_images, test_labels;
  std::vector<std::string> train_batches, test_batches;
  // Stratified subsample sizes; 0 keeps everything.
  std::size_t train_n = 0;
  std::size_t test_n = 0;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string output_dir = "runs";
  DatasetConfig dataset;
  std::vector<std::size_t> hidden{64};
  TrainConfig train{0.05, 0.9, 32, 1000, 0, 0.0};
  std::vector<double> sparsities{0.0, 0.8};
  PruneScope scope = PruneScope::kGlobal;
  std::size_t attack_n_per_side = 100;
  std::vector<std::uint64_t> attack_seeds{1, 2, 3, 4, 5};
  std::size_t attack_hidden_units = 100;
  double attack_sparsity = 0.8;
  bool sort_confidences = false;
  TrainConfig attack_train{0.05, 0.9, 32, 1000, 0, 0.0};
  std::vector<std::size_t> transfer_widths{32, 128};
  std::vector<double> transfer_sparsities{0.0, 0.8};
  std::vector<int> class_counts{2, 10, 50};
};

// Parses and validates a config document. Unknown keys, wrong types and
// out-of-range values throw ConfigError.
ExperimentConfig ParseConfig(const Json& doc);

// Canonical form of every field that influences results (threads and
// output_dir are left out).
Json CanonicalConfig(const ExperimentConfig& cfg);

// 16 hex digits of FNV-1a over the subcommand name and canonical config.
std::string ConfigHash(const std::string& command, const ExperimentConfig& cfg);

// Entry point behind the ltaudit binary. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ltaudit::cli

#endif  // LTAUDIT_TOOLS_CLI_H_
