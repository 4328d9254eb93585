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

#include "ltaudit/network.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "ltaudit/errors.h"
#include "ltaudit/rng.h"

namespace ltaudit {

const char* ActivationName(Activation a) {
  return a == Activation::kRelu ? "relu" : "identity";
}

std::vector<LayerSpec> MlpLayers(std::size_t in_dim,
                                 const std::vector<std::size_t>& hidden,
                                 std::size_t out_dim) {
  std::vector<LayerSpec> layers;
  std::size_t prev = in_dim;
  for (std::size_t width : hidden) {
    layers.push_back({prev, width, Activation::kRelu});
    prev = width;
  }
  layers.push_back({prev, out_dim, Activation::kIdentity});
  return layers;
}

void ValidateLayers(const std::vector<LayerSpec>& layers) {
  if (layers.empty()) throw InvalidArgument("network needs at least one layer");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].in_dim == 0 || layers[i].out_dim == 0) {
      throw InvalidArgument("layer " + std::to_string(i) +
                            " has a zero dimension");
    }
    if (i > 0 && layers[i - 1].out_dim != layers[i].in_dim) {
      throw InvalidArgument(
          "layer " + std::to_string(i) + " expects in_dim " +
          std::to_string(layers[i].in_dim) + " but previous layer emits " +
          std::to_string(layers[i - 1].out_dim));
    }
  }
  if (layers.back().activation != Activation::kIdentity) {
    throw InvalidArgument("final layer activation must be identity");
  }
}

namespace {

void CheckParams(const std::vector<LayerSpec>& layers,
                 const std::vector<LayerParams>& params, const char* what) {
  if (params.size() != layers.size()) {
    throw InvalidArgument(std::string(what) + " layer count mismatch");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& p = params[i];
    if (p.weight.shape() !=
            std::vector<std::size_t>{layers[i].out_dim, layers[i].in_dim} ||
        p.bias.shape() != std::vector<std::size_t>{layers[i].out_dim}) {
      throw InvalidArgument(std::string(what) + " shape mismatch at layer " +
                            std::to_string(i));
    }
  }
}

}  // namespace

Network::Network(std::vector<LayerSpec> layers, std::vector<LayerParams> params,
                 std::vector<LayerParams> init_snapshot, std::uint64_t seed)
    : layers_(std::move(layers)),
      params_(std::move(params)),
      snapshot_(std::move(init_snapshot)),
      seed_(seed) {
  ValidateLayers(layers_);
  CheckParams(layers_, params_, "weights");
  CheckParams(layers_, snapshot_, "init snapshot");
}

std::size_t Network::weight_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.weight.size();
  return n;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.weight.size() + p.bias.size();
  return n;
}

Network Network::WithParams(std::vector<LayerParams> params) const {
  return Network(layers_, std::move(params), snapshot_, seed_);
}

Network InitNetwork(const std::vector<LayerSpec>& layers, std::uint64_t seed) {
  ValidateLayers(layers);
  Rng rng = Rng::Stream(seed, rng_stream::kInit);
  std::vector<LayerParams> params;
  params.reserve(layers.size());
  for (const auto& spec : layers) {
    LayerParams p{Tensor::Matrix(spec.out_dim, spec.in_dim),
                  Tensor({spec.out_dim})};
    const double limit =
        std::sqrt(6.0 / static_cast<double>(spec.in_dim + spec.out_dim));
    for (double& w : p.weight.data()) w = rng.Uniform(-limit, limit);
    params.push_back(std::move(p));
  }
  auto snapshot = params;
  return Network(layers, std::move(params), std::move(snapshot), seed);
}

Tensor Forward(const Network& net, const Tensor& batch) {
  if (batch.rank() != 2 || batch.cols() != net.input_dim()) {
    throw InvalidArgument("batch has " + std::to_string(batch.cols()) +
                          " columns, network expects " +
                          std::to_string(net.input_dim()));
  }
  Tensor current = batch;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const LayerSpec& spec = net.layers()[l];
    const LayerParams& p = net.params()[l];
    Tensor out = Tensor::Matrix(current.rows(), spec.out_dim);
    for (std::size_t r = 0; r < current.rows(); ++r) {
      const auto in = current.row(r);
      auto dst = out.row(r);
      for (std::size_t o = 0; o < spec.out_dim; ++o) {
        const auto w = p.weight.row(o);
        double acc = p.bias[o];
        for (std::size_t i = 0; i < spec.in_dim; ++i) acc += w[i] * in[i];
        dst[o] = spec.activation == Activation::kRelu ? std::max(acc, 0.0) : acc;
      }
    }
    current = std::move(out);
  }
  return current;
}

Tensor SoftmaxConfidences(const Tensor& logits) {
  if (logits.rank() != 2) throw InvalidArgument("logits must be a matrix");
  Tensor probs = logits;
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    auto row = probs.row(r);
    const double max = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double& v : row) {
      v = std::exp(v - max);
      total += v;
    }
    for (double& v : row) {
      v /= total;
      // Keep entries strictly inside (0, 1) even when exp underflows.
      v = std::clamp(v, std::numeric_limits<double>::min(),
                     std::nextafter(1.0, 0.0));
    }
  }
  return probs;
}

std::vector<int> ArgmaxRows(const Tensor& scores) {
  std::vector<int> out(scores.rows());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto row = scores.row(r);
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    out[r] = static_cast<int>(best);
  }
  return out;
}

}  // namespace ltaudit
