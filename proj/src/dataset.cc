// Copyright 2026 The fedq Authors.
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

#include "fedq/dataset.h"

#include <numeric>
#include <string>
#include <utility>

#include "fedq/errors.h"

namespace fedq {

LabeledDataset::LabeledDataset(std::size_t input_dim, int num_classes,
                               std::vector<double> features,
                               std::vector<int> labels)
    : input_dim_(input_dim),
      num_classes_(num_classes),
      features_(std::move(features)),
      labels_(std::move(labels)) {
  if (input_dim_ == 0) throw InputError("dataset input_dim must be >= 1");
  if (num_classes_ < 2) throw InputError("dataset needs at least 2 classes");
  if (features_.size() != labels_.size() * input_dim_) {
    throw InputError("dataset has " + std::to_string(labels_.size()) +
                     " labels but " + std::to_string(features_.size()) +
                     " feature values for input_dim " +
                     std::to_string(input_dim_));
  }
  for (int y : labels_) {
    if (y < 0 || y >= num_classes_) {
      throw InputError("label " + std::to_string(y) + " outside [0, " +
                       std::to_string(num_classes_) + ")");
    }
  }
}

IndexList AllIndices(std::size_t n) {
  IndexList idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

std::vector<std::int64_t> LabelHistogram(const LabeledDataset& data,
                                         std::span<const std::size_t> indices) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(data.num_classes()),
                                   0);
  for (std::size_t i : indices) {
    if (i >= data.size()) {
      throw InputError("sample index " + std::to_string(i) +
                       " out of range for dataset of size " +
                       std::to_string(data.size()));
    }
    ++counts[static_cast<std::size_t>(data.label(i))];
  }
  return counts;
}

std::vector<std::int64_t> LabelHistogram(const LabeledDataset& data) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(data.num_classes()),
                                   0);
  for (int y : data.labels()) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

}  // namespace fedq
