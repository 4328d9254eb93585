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

#ifndef LTAUDIT_NETWORK_H_
#define LTAUDIT_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ltaudit/tensor.h"

namespace ltaudit {

enum class Activation { kRelu, kIdentity };

const char* ActivationName(Activation a);

// Fully connected layer. Softmax is never a layer: it is applied by the loss
// and by SoftmaxConfidences.
struct LayerSpec {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Activation activation = Activation::kIdentity;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct LayerParams {
  Tensor weight;  // out_dim x in_dim
  Tensor bias;    // out_dim

  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

// in -> hidden... (ReLU) -> out (identity).
std::vector<LayerSpec> MlpLayers(std::size_t in_dim,
                                 const std::vector<std::size_t>& hidden,
                                 std::size_t out_dim);

// Throws InvalidArgument unless dims chain, are positive, and the final
// activation is identity.
void ValidateLayers(const std::vector<LayerSpec>& layers);

// Feed-forward classifier. Keeps the weights it was created with as an
// immutable snapshot for rewinding.
class Network {
 public:
  Network(std::vector<LayerSpec> layers, std::vector<LayerParams> params,
          std::vector<LayerParams> init_snapshot, std::uint64_t seed);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  const std::vector<LayerParams>& params() const { return params_; }
  std::vector<LayerParams>& mutable_params() { return params_; }
  const std::vector<LayerParams>& init_snapshot() const { return snapshot_; }
  std::uint64_t seed() const { return seed_; }

  std::size_t input_dim() const { return layers_.front().in_dim; }
  std::size_t class_count() const { return layers_.back().out_dim; }
  // Entries of all weight matrices (the prunable parameters).
  std::size_t weight_count() const;
  // Weights plus biases.
  std::size_t parameter_count() const;

  // Same layers, snapshot and seed; current parameters replaced.
  Network WithParams(std::vector<LayerParams> params) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<LayerSpec> layers_;
  std::vector<LayerParams> params_;
  std::vector<LayerParams> snapshot_;
  std::uint64_t seed_ = 0;
};

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero. The
// snapshot equals the weights.
Network InitNetwork(const std::vector<LayerSpec>& layers, std::uint64_t seed);

// Logits for each row of batch (rows x input_dim).
Tensor Forward(const Network& net, const Tensor& batch);

// Row-wise softmax with max subtraction.
Tensor SoftmaxConfidences(const Tensor& logits);

// Argmax per row; ties go to the lowest class index.
std::vector<int> ArgmaxRows(const Tensor& scores);

}  // namespace ltaudit

#endif  // LTAUDIT_NETWORK_H_
