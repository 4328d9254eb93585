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

#ifndef LTAUDIT_TRAIN_H_
#define LTAUDIT_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ltaudit/dataset.h"
#include "ltaudit/mask.h"
#include "ltaudit/network.h"
#include "ltaudit/tensor.h"

namespace ltaudit {

struct TrainConfig {
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::size_t batch_size = 32;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  double l2_penalty = 0.0;

  // Throws InvalidArgument on out-of-range fields. Pass the dataset size to
  // also check batch_size against it.
  void Validate(std::optional<std::size_t> dataset_size = std::nullopt) const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainReport {
  std::size_t iterations = 0;
  double train_accuracy = 0.0;
  std::optional<double> test_accuracy;
  // Minibatch loss (cross entropy plus L2 term) before each step.
  std::vector<double> loss_curve;
};

// Runs exactly cfg.iterations minibatch SGD-with-momentum steps on net.
// Minibatches come from a fresh seeded permutation of the training set each
// epoch; a trailing partial batch is dropped. With a mask, masked weights are
// zeroed before the first step and stay exactly zero after every step.
// Throws NumericError as soon as the loss or an update is not finite.
TrainReport Train(Network& net, const Dataset& train_set, const TrainConfig& cfg,
                  const Mask* mask = nullptr, const Dataset* test_set = nullptr);

std::vector<int> Predict(const Network& net, const Tensor& batch);

// Fraction of argmax-correct predictions. Throws on an empty dataset.
double Evaluate(const Network& net, const Dataset& data);

struct LossAndGradients {
  double loss = 0.0;
  std::vector<LayerParams> grads;  // congruent with the network's params
};

// Mean softmax cross entropy over the batch plus 0.5 * l2 * sum(w^2) over
// weight matrices, and its gradient by backpropagation.
LossAndGradients ComputeGradients(const Network& net, const Tensor& batch,
                                  std::span<const int> labels,
                                  double l2_penalty = 0.0);

double BatchLoss(const Network& net, const Tensor& batch,
                 std::span<const int> labels, double l2_penalty = 0.0);

// Largest relative error between `analytic` and central differences with
// step 1e-5, over every weight and bias. The relative error of one entry is
// |a - n| / max(|a|, |n|, 1e-6).
double FiniteDifferenceError(const Network& net, const Tensor& batch,
                             std::span<const int> labels,
                             const std::vector<LayerParams>& analytic,
                             double l2_penalty = 0.0);

// FiniteDifferenceError against the backpropagated gradient.
double GradientCheck(const Network& net, const Tensor& batch,
                     std::span<const int> labels, double l2_penalty = 0.0);

}  // namespace ltaudit

#endif  // LTAUDIT_TRAIN_H_
