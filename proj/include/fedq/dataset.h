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

#ifndef FEDQ_DATASET_H_
#define FEDQ_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fedq {

// Dense labeled samples. Features are stored row-major, one row per sample.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  // Throws InputError when the row count does not match the label count or a
  // label is outside [0, num_classes).
  LabeledDataset(std::size_t input_dim, int num_classes,
                 std::vector<double> features, std::vector<int> labels);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t input_dim() const { return input_dim_; }
  int num_classes() const { return num_classes_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * input_dim_, input_dim_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }
  std::span<const double> features() const { return features_; }

 private:
  std::size_t input_dim_ = 0;
  int num_classes_ = 0;
  std::vector<double> features_;
  std::vector<int> labels_;
};

using IndexList = std::vector<std::size_t>;

// Index list 0..n-1.
IndexList AllIndices(std::size_t n);

// Exact per-class counts over `indices` (or the whole dataset).
std::vector<std::int64_t> LabelHistogram(const LabeledDataset& data,
                                         std::span<const std::size_t> indices);
std::vector<std::int64_t> LabelHistogram(const LabeledDataset& data);

}  // namespace fedq

#endif  // FEDQ_DATASET_H_
