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

#include "ltaudit/mask.h"

#include <string>

#include "ltaudit/errors.h"

namespace ltaudit {

Mask Mask::Ones(const Network& net) {
  Mask m;
  for (const auto& p : net.params()) {
    Tensor t(p.weight.shape());
    t.Fill(1.0);
    m.layers.push_back(std::move(t));
  }
  return m;
}

Mask Mask::Zeros(const Network& net) {
  Mask m;
  for (const auto& p : net.params()) m.layers.emplace_back(p.weight.shape());
  return m;
}

bool Mask::CongruentTo(const Network& net) const {
  if (layers.size() != net.params().size()) return false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].SameShape(net.params()[i].weight)) return false;
  }
  return true;
}

std::size_t Mask::size() const {
  std::size_t n = 0;
  for (const auto& t : layers) n += t.size();
  return n;
}

std::size_t Mask::zero_count() const {
  std::size_t n = 0;
  for (const auto& t : layers) {
    for (double v : t.data()) n += v == 0.0 ? 1 : 0;
  }
  return n;
}

double Mask::sparsity() const {
  const std::size_t n = size();
  return n == 0 ? 0.0 : static_cast<double>(zero_count()) / static_cast<double>(n);
}

void ValidateMask(const Mask& mask, const Network& net) {
  if (!mask.CongruentTo(net)) {
    throw InvalidArgument("mask is not congruent to the network weights");
  }
  for (std::size_t l = 0; l < mask.layers.size(); ++l) {
    for (double v : mask.layers[l].data()) {
      if (v != 0.0 && v != 1.0) {
        throw InvalidArgument("mask layer " + std::to_string(l) +
                              " holds a non-binary entry");
      }
    }
  }
}

void ApplyMask(const Mask& mask, std::vector<LayerParams>& params) {
  for (std::size_t l = 0; l < mask.layers.size(); ++l) {
    auto& w = params[l].weight.data();
    const auto& m = mask.layers[l].data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= m[i];
  }
}

}  // namespace ltaudit
