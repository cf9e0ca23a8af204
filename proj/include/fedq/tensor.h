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

#ifndef FEDQ_TENSOR_H_
#define FEDQ_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fedq {

using Shape = std::vector<std::size_t>;

std::size_t NumElements(const Shape& shape);
std::string ShapeToString(const Shape& shape);

// Row-major dense tensor of doubles. length(values) == product(shape) and
// every dimension is positive.
class DenseTensor {
 public:
  DenseTensor() = default;
  // Zero-filled tensor.
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  // 2-D accessor, row-major.
  double at(std::size_t row, std::size_t col) const {
    return values_[row * shape_[1] + col];
  }

  bool AllFinite() const;

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

struct NamedTensor {
  std::string name;
  DenseTensor tensor;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

// Ordered collection of uniquely named tensors; the model parameters, their
// gradients, and noise vectors all share this type.
class ParamSet {
 public:
  ParamSet() = default;

  // Appends a tensor. Throws InputError on a duplicate name.
  void Add(std::string name, DenseTensor tensor);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<NamedTensor>& entries() const { return entries_; }
  std::vector<NamedTensor>& mutable_entries() { return entries_; }

  const NamedTensor& operator[](std::size_t i) const { return entries_[i]; }
  NamedTensor& operator[](std::size_t i) { return entries_[i]; }

  // Returns nullptr when absent.
  const DenseTensor* Find(const std::string& name) const;

  std::size_t NumElements() const;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  std::vector<NamedTensor> entries_;
};

// True iff names, order and shapes all match.
bool Conformable(const ParamSet& a, const ParamSet& b);
// Throws InputError naming `what` when the two sets are not conformable.
void CheckConformable(const ParamSet& a, const ParamSet& b, const char* what);

// Same names and shapes as `like`, all zeros.
ParamSet ZerosLike(const ParamSet& like);

ParamSet Add(const ParamSet& a, const ParamSet& b);
ParamSet Subtract(const ParamSet& a, const ParamSet& b);
ParamSet Scale(const ParamSet& p, double c);

// Sum of |x| over every element.
double L1Norm(const ParamSet& p);
// max |x| over every element; 0 for an empty set.
double MaxAbs(const ParamSet& p);
// max |a - b| elementwise.
double MaxAbsDiff(const ParamSet& a, const ParamSet& b);

bool AllFinite(const ParamSet& p);

}  // namespace fedq

#endif  // FEDQ_TENSOR_H_
