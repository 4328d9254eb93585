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

#include "ltaudit/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "ltaudit/errors.h"
#include "ltaudit/rng.h"

namespace ltaudit {
namespace {

constexpr double kFiniteDifferenceStep = 1e-5;
constexpr double kRelativeErrorFloor = 1e-6;

void CheckLabels(std::span<const int> labels, std::size_t rows,
                 std::size_t class_count) {
  if (labels.size() != rows) {
    throw InvalidArgument("label count " + std::to_string(labels.size()) +
                          " does not match batch rows " + std::to_string(rows));
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= class_count) {
      throw InvalidArgument("label " + std::to_string(y) +
                            " outside class range " +
                            std::to_string(class_count));
    }
  }
}

// Post-activation outputs of every layer; acts[0] is the input batch.
std::vector<Tensor> ForwardCached(const Network& net, const Tensor& batch) {
  std::vector<Tensor> acts;
  acts.reserve(net.layers().size() + 1);
  acts.push_back(batch);
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const LayerSpec& spec = net.layers()[l];
    const LayerParams& p = net.params()[l];
    const Tensor& in = acts.back();
    Tensor out = Tensor::Matrix(in.rows(), spec.out_dim);
    for (std::size_t r = 0; r < in.rows(); ++r) {
      const auto x = in.row(r);
      auto dst = out.row(r);
      for (std::size_t o = 0; o < spec.out_dim; ++o) {
        const auto w = p.weight.row(o);
        double acc = p.bias[o];
        for (std::size_t i = 0; i < spec.in_dim; ++i) acc += w[i] * x[i];
        dst[o] = spec.activation == Activation::kRelu ? std::max(acc, 0.0) : acc;
      }
    }
    acts.push_back(std::move(out));
  }
  return acts;
}

double L2Term(const Network& net, double l2_penalty) {
  if (l2_penalty == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& p : net.params()) {
    for (double w : p.weight.data()) sum += w * w;
  }
  return 0.5 * l2_penalty * sum;
}

double CrossEntropy(const Tensor& logits, std::span<const int> labels) {
  double loss = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto row = logits.row(r);
    const double max = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double v : row) total += std::exp(v - max);
    loss += max + std::log(total) - row[labels[r]];
  }
  return loss / static_cast<double>(logits.rows());
}

std::vector<LayerParams> ZerosLike(const std::vector<LayerParams>& params) {
  std::vector<LayerParams> out;
  out.reserve(params.size());
  for (const auto& p : params) {
    out.push_back({Tensor(p.weight.shape()), Tensor(p.bias.shape())});
  }
  return out;
}

}  // namespace

void TrainConfig::Validate(std::optional<std::size_t> dataset_size) const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw InvalidArgument("momentum must lie in [0, 1)");
  }
  if (batch_size == 0) throw InvalidArgument("batch_size must be positive");
  if (iterations == 0) throw InvalidArgument("iterations must be at least 1");
  if (!(l2_penalty >= 0.0) || !std::isfinite(l2_penalty)) {
    throw InvalidArgument("l2_penalty must be non-negative");
  }
  if (dataset_size && batch_size > *dataset_size) {
    throw InvalidArgument("batch_size " + std::to_string(batch_size) +
                          " exceeds dataset size " +
                          std::to_string(*dataset_size));
  }
}

LossAndGradients ComputeGradients(const Network& net, const Tensor& batch,
                                  std::span<const int> labels,
                                  double l2_penalty) {
  if (batch.rank() != 2 || batch.cols() != net.input_dim()) {
    throw InvalidArgument("batch width does not match network input");
  }
  CheckLabels(labels, batch.rows(), net.class_count());
  const std::vector<Tensor> acts = ForwardCached(net, batch);
  const std::size_t rows = batch.rows();
  const double scale = 1.0 / static_cast<double>(rows);

  LossAndGradients result;
  result.loss = CrossEntropy(acts.back(), labels) + L2Term(net, l2_penalty);
  result.grads = ZerosLike(net.params());

  // dLoss/dlogits = (softmax - onehot) / rows.
  Tensor delta = acts.back();
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = delta.row(r);
    const auto logits = acts.back().row(r);
    const double max = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = std::exp(logits[c] - max);
      total += row[c];
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = (row[c] / total - (static_cast<int>(c) == labels[r] ? 1.0 : 0.0)) *
               scale;
    }
  }

  for (std::size_t l = net.layers().size(); l-- > 0;) {
    const LayerSpec& spec = net.layers()[l];
    const LayerParams& p = net.params()[l];
    LayerParams& g = result.grads[l];
    const Tensor& in = acts[l];
    for (std::size_t r = 0; r < rows; ++r) {
      const auto d = delta.row(r);
      const auto x = in.row(r);
      for (std::size_t o = 0; o < spec.out_dim; ++o) {
        const double dv = d[o];
        if (dv == 0.0) continue;
        auto gw = g.weight.row(o);
        for (std::size_t i = 0; i < spec.in_dim; ++i) gw[i] += dv * x[i];
        g.bias[o] += dv;
      }
    }
    if (l2_penalty != 0.0) {
      for (std::size_t i = 0; i < g.weight.size(); ++i) {
        g.weight[i] += l2_penalty * p.weight[i];
      }
    }
    if (l == 0) break;
    Tensor prev = Tensor::Matrix(rows, spec.in_dim);
    const bool relu = net.layers()[l - 1].activation == Activation::kRelu;
    for (std::size_t r = 0; r < rows; ++r) {
      const auto d = delta.row(r);
      auto dst = prev.row(r);
      for (std::size_t o = 0; o < spec.out_dim; ++o) {
        const double dv = d[o];
        if (dv == 0.0) continue;
        const auto w = p.weight.row(o);
        for (std::size_t i = 0; i < spec.in_dim; ++i) dst[i] += dv * w[i];
      }
      if (relu) {
        const auto a = in.row(r);
        for (std::size_t i = 0; i < spec.in_dim; ++i) {
          if (!(a[i] > 0.0)) dst[i] = 0.0;
        }
      }
    }
    delta = std::move(prev);
  }
  return result;
}

double BatchLoss(const Network& net, const Tensor& batch,
                 std::span<const int> labels, double l2_penalty) {
  CheckLabels(labels, batch.rows(), net.class_count());
  return CrossEntropy(Forward(net, batch), labels) + L2Term(net, l2_penalty);
}

double FiniteDifferenceError(const Network& net, const Tensor& batch,
                             std::span<const int> labels,
                             const std::vector<LayerParams>& analytic,
                             double l2_penalty) {
  Network probe = net;
  double worst = 0.0;
  auto check = [&](double& slot, double analytic_value) {
    const double saved = slot;
    slot = saved + kFiniteDifferenceStep;
    const double plus = BatchLoss(probe, batch, labels, l2_penalty);
    slot = saved - kFiniteDifferenceStep;
    const double minus = BatchLoss(probe, batch, labels, l2_penalty);
    slot = saved;
    const double numeric = (plus - minus) / (2.0 * kFiniteDifferenceStep);
    const double denom = std::max(
        {std::abs(analytic_value), std::abs(numeric), kRelativeErrorFloor});
    const double err = std::abs(analytic_value - numeric) / denom;
    if (std::isfinite(err)) {
      worst = std::max(worst, err);
    } else {
      worst = err;
    }
  };
  auto& params = probe.mutable_params();
  for (std::size_t l = 0; l < params.size(); ++l) {
    for (std::size_t i = 0; i < params[l].weight.size(); ++i) {
      check(params[l].weight[i], analytic[l].weight[i]);
    }
    for (std::size_t i = 0; i < params[l].bias.size(); ++i) {
      check(params[l].bias[i], analytic[l].bias[i]);
    }
  }
  return worst;
}

double GradientCheck(const Network& net, const Tensor& batch,
                     std::span<const int> labels, double l2_penalty) {
  const LossAndGradients lg = ComputeGradients(net, batch, labels, l2_penalty);
  return FiniteDifferenceError(net, batch, labels, lg.grads, l2_penalty);
}

std::vector<int> Predict(const Network& net, const Tensor& batch) {
  return ArgmaxRows(Forward(net, batch));
}

double Evaluate(const Network& net, const Dataset& data) {
  if (data.empty()) throw InvalidArgument("cannot evaluate on an empty dataset");
  const std::vector<int> predicted = Predict(net, data.features);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    correct += predicted[i] == data.labels[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainReport Train(Network& net, const Dataset& train_set, const TrainConfig& cfg,
                  const Mask* mask, const Dataset* test_set) {
  train_set.Validate();
  if (train_set.empty()) throw InvalidArgument("training set is empty");
  cfg.Validate(train_set.size());
  if (train_set.dim() != net.input_dim()) {
    throw InvalidArgument("training features do not match network input");
  }
  CheckLabels(train_set.labels, train_set.size(), net.class_count());
  if (mask != nullptr) {
    ValidateMask(*mask, net);
    ApplyMask(*mask, net.mutable_params());
  }

  const std::size_t n = train_set.size();
  const std::size_t dim = train_set.dim();
  Rng rng = Rng::Stream(cfg.seed, rng_stream::kShuffle);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.Shuffle(std::span<std::size_t>(order));
  std::size_t cursor = 0;

  std::vector<LayerParams> velocity = ZerosLike(net.params());
  Tensor batch = Tensor::Matrix(cfg.batch_size, dim);
  std::vector<int> labels(cfg.batch_size);

  TrainReport report;
  report.iterations = cfg.iterations;
  report.loss_curve.reserve(cfg.iterations);

  for (std::size_t step = 0; step < cfg.iterations; ++step) {
    if (cursor + cfg.batch_size > n) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      rng.Shuffle(std::span<std::size_t>(order));
      cursor = 0;
    }
    for (std::size_t b = 0; b < cfg.batch_size; ++b) {
      const std::size_t idx = order[cursor + b];
      std::copy_n(train_set.features.row(idx).begin(), dim,
                  batch.row(b).begin());
      labels[b] = train_set.labels[idx];
    }
    cursor += cfg.batch_size;

    LossAndGradients lg = ComputeGradients(net, batch, labels, cfg.l2_penalty);
    if (!std::isfinite(lg.loss)) {
      throw NumericError("non-finite training loss at iteration " +
                         std::to_string(step) + " (lr=" +
                         std::to_string(cfg.learning_rate) + ")");
    }
    report.loss_curve.push_back(lg.loss);
    if (mask != nullptr) ApplyMask(*mask, lg.grads);

    auto& params = net.mutable_params();
    for (std::size_t l = 0; l < params.size(); ++l) {
      auto update = [&](Tensor& w, Tensor& v, const Tensor& g) {
        for (std::size_t i = 0; i < w.size(); ++i) {
          v[i] = cfg.momentum * v[i] - cfg.learning_rate * g[i];
          w[i] += v[i];
        }
      };
      update(params[l].weight, velocity[l].weight, lg.grads[l].weight);
      update(params[l].bias, velocity[l].bias, lg.grads[l].bias);
    }
    if (mask != nullptr) ApplyMask(*mask, params);
  }

  for (const auto& p : net.params()) {
    if (!p.weight.AllFinite() || !p.bias.AllFinite()) {
      throw NumericError("non-finite weights after training");
    }
  }
  report.train_accuracy = Evaluate(net, train_set);
  if (test_set != nullptr && !test_set->empty()) {
    report.test_accuracy = Evaluate(net, *test_set);
  }
  return report;
}

}  // namespace ltaudit
