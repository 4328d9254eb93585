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

#ifndef LTAUDIT_DATASET_H_
#define LTAUDIT_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ltaudit/tensor.h"

namespace ltaudit {

enum class Provenance { kSynthetic, kMnist, kCifar10 };
enum class Split { kTrain, kTest };

const char* ProvenanceName(Provenance p);

// Labelled feature matrix: one row per sample, labels in [0, class_count).
struct Dataset {
  Tensor features;  // n x d
  std::vector<int> labels;
  int class_count = 0;
  Provenance provenance = Provenance::kSynthetic;
  Split split = Split::kTrain;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
  bool empty() const { return labels.empty(); }

  // Throws InvalidArgument if rows and labels disagree or a label is out of
  // range.
  void Validate() const;

  // Rows at the given indices, in that order.
  Dataset Select(std::span<const std::size_t> indices) const;

  // Number of samples per class.
  std::vector<std::size_t> ClassCounts() const;
};

struct DataSplit {
  Dataset train;
  Dataset test;
};

// Isotropic Gaussian classes with unit standard deviation.
struct SyntheticSpec {
  int class_count = 2;
  std::size_t dim = 2;
  std::size_t n_per_class = 50;
  // Expected distance between two class means, in units of cluster std.
  double cluster_sep = 3.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Draws class means once, then n_per_class train and n_per_class test
// samples per class from the same distribution.
DataSplit MakeSynthetic(const SyntheticSpec& spec);

// MNIST-style IDX image (magic 0x00000803) and label (0x00000801) files.
Dataset LoadIdx(const std::string& images_path, const std::string& labels_path,
                Split split = Split::kTrain);

// CIFAR-10 binary batches: 3073-byte records, label byte then R, G, B planes.
Dataset LoadCifar10(std::span<const std::string> batch_paths,
                    Split split = Split::kTrain);

// In-memory parsers behind the loaders.
Dataset ParseIdx(std::span<const std::uint8_t> images,
                 std::span<const std::uint8_t> labels,
                 Split split = Split::kTrain);
Dataset ParseCifar10(std::span<const std::uint8_t> bytes,
                     Split split = Split::kTrain);

// Stratified sample of n rows without replacement. Each class keeps its
// share of n to within one sample; the result is shuffled.
Dataset Subsample(const Dataset& ds, std::size_t n, std::uint64_t seed);

}  // namespace ltaudit

#endif  // LTAUDIT_DATASET_H_
