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

#ifndef LTAUDIT_MASK_H_
#define LTAUDIT_MASK_H_

#include <cstddef>
#include <vector>

#include "ltaudit/network.h"
#include "ltaudit/tensor.h"

namespace ltaudit {

// Binary keep/prune flags, one tensor per weight matrix. Biases have no
// entry and are never pruned.
struct Mask {
  std::vector<Tensor> layers;

  static Mask Ones(const Network& net);
  static Mask Zeros(const Network& net);

  bool CongruentTo(const Network& net) const;
  std::size_t size() const;
  std::size_t zero_count() const;
  double sparsity() const;

  friend bool operator==(const Mask&, const Mask&) = default;
};

// Throws InvalidArgument when the mask does not match the network or holds
// values other than 0 and 1.
void ValidateMask(const Mask& mask, const Network& net);

// Multiplies every weight by its mask bit.
void ApplyMask(const Mask& mask, std::vector<LayerParams>& params);

}  // namespace ltaudit

#endif  // LTAUDIT_MASK_H_
