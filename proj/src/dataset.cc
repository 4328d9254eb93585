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

#include "ltaudit/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "ltaudit/errors.h"
#include "ltaudit/rng.h"

namespace ltaudit {
namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
constexpr std::size_t kIdxImageHeader = 16;
constexpr std::size_t kIdxLabelHeader = 8;
constexpr std::size_t kCifarPixels = 3072;
constexpr std::size_t kCifarRecord = kCifarPixels + 1;
constexpr int kImageClasses = 10;

std::uint32_t ReadBigEndian32(std::span<const std::uint8_t> bytes,
                              std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) |
         (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) |
         std::uint32_t{bytes[offset + 3]};
}

std::vector<std::uint8_t> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path);
  return bytes;
}

}  // namespace

const char* ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kSynthetic:
      return "synthetic";
    case Provenance::kMnist:
      return "mnist";
    case Provenance::kCifar10:
      return "cifar10";
  }
  return "unknown";
}

void Dataset::Validate() const {
  if (class_count < 1) throw InvalidArgument("class_count must be positive");
  if (!labels.empty() && features.rows() != labels.size()) {
    throw InvalidArgument("feature rows do not match label count");
  }
  for (int y : labels) {
    if (y < 0 || y >= class_count) {
      throw InvalidArgument("label " + std::to_string(y) +
                            " outside [0, " + std::to_string(class_count) + ")");
    }
  }
}

Dataset Dataset::Select(std::span<const std::size_t> indices) const {
  Dataset out;
  out.class_count = class_count;
  out.provenance = provenance;
  out.split = split;
  if (indices.empty()) return out;
  const std::size_t d = dim();
  out.features = Tensor::Matrix(indices.size(), d);
  out.labels.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= size()) throw InvalidArgument("index out of range");
    const auto src = features.row(indices[i]);
    std::copy(src.begin(), src.end(), out.features.row(i).begin());
    out.labels.push_back(labels[indices[i]]);
  }
  return out;
}

std::vector<std::size_t> Dataset::ClassCounts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(class_count), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

void SyntheticSpec::Validate() const {
  if (class_count < 2) throw InvalidArgument("synthetic data needs k >= 2");
  if (dim < 1) throw InvalidArgument("synthetic data needs d >= 1");
  if (n_per_class < 2) throw InvalidArgument("n_per_class must be >= 2");
  if (!(cluster_sep >= 0.0) || !std::isfinite(cluster_sep)) {
    throw InvalidArgument("cluster_sep must be non-negative");
  }
}

DataSplit MakeSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng = Rng::Stream(spec.seed, rng_stream::kSynthetic);
  const auto k = static_cast<std::size_t>(spec.class_count);
  // Gaussian means scaled so that E|m_i - m_j|^2 = cluster_sep^2.
  const double mean_scale =
      spec.cluster_sep / std::sqrt(2.0 * static_cast<double>(spec.dim));
  Tensor means = Tensor::Matrix(k, spec.dim);
  for (double& m : means.data()) m = mean_scale * rng.Normal();

  auto draw = [&](Split split) {
    Dataset ds;
    ds.class_count = spec.class_count;
    ds.provenance = Provenance::kSynthetic;
    ds.split = split;
    ds.features = Tensor::Matrix(k * spec.n_per_class, spec.dim);
    ds.labels.reserve(k * spec.n_per_class);
    std::size_t row = 0;
    for (std::size_t i = 0; i < spec.n_per_class; ++i) {
      for (std::size_t c = 0; c < k; ++c, ++row) {
        auto dst = ds.features.row(row);
        const auto mean = means.row(c);
        for (std::size_t j = 0; j < spec.dim; ++j) dst[j] = mean[j] + rng.Normal();
        ds.labels.push_back(static_cast<int>(c));
      }
    }
    return ds;
  };
  DataSplit out;
  out.train = draw(Split::kTrain);
  out.test = draw(Split::kTest);
  return out;
}

Dataset ParseIdx(std::span<const std::uint8_t> images,
                 std::span<const std::uint8_t> labels, Split split) {
  if (images.size() < 4 || labels.size() < 4) {
    throw FormatError(FormatErrorCode::kTruncated, "IDX header shorter than magic");
  }
  if (ReadBigEndian32(images, 0) != kIdxImageMagic) {
    throw FormatError(FormatErrorCode::kBadMagic, "IDX image file magic");
  }
  if (ReadBigEndian32(labels, 0) != kIdxLabelMagic) {
    throw FormatError(FormatErrorCode::kBadMagic, "IDX label file magic");
  }
  if (images.size() < kIdxImageHeader || labels.size() < kIdxLabelHeader) {
    throw FormatError(FormatErrorCode::kTruncated, "IDX header incomplete");
  }
  const std::size_t count = ReadBigEndian32(images, 4);
  const std::size_t rows = ReadBigEndian32(images, 8);
  const std::size_t cols = ReadBigEndian32(images, 12);
  const std::size_t label_count = ReadBigEndian32(labels, 4);
  if (count != label_count) {
    throw FormatError(FormatErrorCode::kCountMismatch,
                      std::to_string(count) + " images vs " +
                          std::to_string(label_count) + " labels");
  }
  if (count == 0 || rows == 0 || cols == 0) {
    throw FormatError(FormatErrorCode::kBadSize, "IDX file has a zero dimension");
  }
  const std::size_t pixels = rows * cols;
  if (images.size() < kIdxImageHeader + count * pixels) {
    throw FormatError(FormatErrorCode::kTruncated, "IDX image data");
  }
  if (labels.size() < kIdxLabelHeader + count) {
    throw FormatError(FormatErrorCode::kTruncated, "IDX label data");
  }

  Dataset ds;
  ds.class_count = kImageClasses;
  ds.provenance = Provenance::kMnist;
  ds.split = split;
  ds.features = Tensor::Matrix(count, pixels);
  const auto* src = images.data() + kIdxImageHeader;
  for (std::size_t i = 0; i < count * pixels; ++i) {
    ds.features[i] = static_cast<double>(src[i]) / 255.0;
  }
  ds.labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int y = labels[kIdxLabelHeader + i];
    if (y >= kImageClasses) {
      throw FormatError(FormatErrorCode::kBadLabel,
                        "IDX label " + std::to_string(y) + " at index " +
                            std::to_string(i));
    }
    ds.labels.push_back(y);
  }
  return ds;
}

Dataset LoadIdx(const std::string& images_path, const std::string& labels_path,
                Split split) {
  const auto images = ReadFile(images_path);
  const auto labels = ReadFile(labels_path);
  return ParseIdx(images, labels, split);
}

Dataset ParseCifar10(std::span<const std::uint8_t> bytes, Split split) {
  if (bytes.empty() || bytes.size() % kCifarRecord != 0) {
    throw FormatError(FormatErrorCode::kBadSize,
                      "CIFAR-10 batch of " + std::to_string(bytes.size()) +
                          " bytes is not a multiple of 3073");
  }
  const std::size_t count = bytes.size() / kCifarRecord;
  Dataset ds;
  ds.class_count = kImageClasses;
  ds.provenance = Provenance::kCifar10;
  ds.split = split;
  ds.features = Tensor::Matrix(count, kCifarPixels);
  ds.labels.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const auto* rec = bytes.data() + r * kCifarRecord;
    if (rec[0] >= kImageClasses) {
      throw FormatError(FormatErrorCode::kBadLabel,
                        "CIFAR-10 label " + std::to_string(rec[0]) +
                            " in record " + std::to_string(r));
    }
    ds.labels.push_back(rec[0]);
    auto dst = ds.features.row(r);
    for (std::size_t j = 0; j < kCifarPixels; ++j) {
      dst[j] = static_cast<double>(rec[1 + j]) / 255.0;
    }
  }
  return ds;
}

Dataset LoadCifar10(std::span<const std::string> batch_paths, Split split) {
  if (batch_paths.empty()) throw InvalidArgument("no CIFAR-10 batch files given");
  std::vector<std::uint8_t> all;
  for (const auto& path : batch_paths) {
    const auto bytes = ReadFile(path);
    if (bytes.empty() || bytes.size() % kCifarRecord != 0) {
      throw FormatError(FormatErrorCode::kBadSize,
                        path + " is not a whole number of 3073-byte records");
    }
    all.insert(all.end(), bytes.begin(), bytes.end());
  }
  return ParseCifar10(all, split);
}

Dataset Subsample(const Dataset& ds, std::size_t n, std::uint64_t seed) {
  ds.Validate();
  if (n > ds.size()) {
    throw InvalidArgument("cannot subsample " + std::to_string(n) + " of " +
                          std::to_string(ds.size()) + " rows");
  }
  Rng rng = Rng::Stream(seed, rng_stream::kSubsample);
  const auto k = static_cast<std::size_t>(ds.class_count);
  std::vector<std::vector<std::size_t>> by_class(k);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);
  }

  // Largest-remainder apportionment of n over the class sizes.
  std::vector<std::size_t> quota(k);
  std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (rem, class)
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t scaled = n * by_class[c].size();
    quota[c] = scaled / ds.size();
    assigned += quota[c];
    remainders.emplace_back(scaled % ds.size(), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
    ++quota[remainders[i].second];
  }

  std::vector<std::size_t> picked;
  picked.reserve(n);
  for (std::size_t c = 0; c < k; ++c) {
    rng.Shuffle(std::span<std::size_t>(by_class[c]));
    picked.insert(picked.end(), by_class[c].begin(),
                  by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  rng.Shuffle(std::span<std::size_t>(picked));
  return ds.Select(picked);
}

}  // namespace ltaudit
