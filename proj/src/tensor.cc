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

#include "fedq/tensor.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fedq/errors.h"

namespace fedq {
namespace {

void ValidateShape(const Shape& shape) {
  if (shape.empty()) throw InputError("tensor shape must have rank >= 1");
  for (std::size_t d : shape) {
    if (d == 0) {
      throw InputError("tensor dimensions must be positive, got " +
                       ShapeToString(shape));
    }
  }
}

template <typename Op>
ParamSet Elementwise(const ParamSet& a, const ParamSet& b, const char* what,
                     Op op) {
  CheckConformable(a, b, what);
  ParamSet out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto dst = out[i].tensor.mutable_values();
    auto rhs = b[i].tensor.values();
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = op(dst[j], rhs[j]);
  }
  return out;
}

}  // namespace

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeToString(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)) {
  ValidateShape(shape_);
  values_.assign(NumElements(shape_), 0.0);
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  ValidateShape(shape_);
  if (values_.size() != NumElements(shape_)) {
    throw InputError("tensor of shape " + ShapeToString(shape_) + " needs " +
                     std::to_string(NumElements(shape_)) + " values, got " +
                     std::to_string(values_.size()));
  }
}

bool DenseTensor::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

void ParamSet::Add(std::string name, DenseTensor tensor) {
  if (Find(name) != nullptr) {
    throw InputError("duplicate parameter name '" + name + "'");
  }
  entries_.push_back({std::move(name), std::move(tensor)});
}

const DenseTensor* ParamSet::Find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e.tensor;
  }
  return nullptr;
}

std::size_t ParamSet::NumElements() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.tensor.size();
  return n;
}

bool Conformable(const ParamSet& a, const ParamSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].tensor.shape() != b[i].tensor.shape()) {
      return false;
    }
  }
  return true;
}

void CheckConformable(const ParamSet& a, const ParamSet& b, const char* what) {
  if (!Conformable(a, b)) {
    throw InputError(std::string(what) +
                     ": parameter sets differ in names, order or shapes");
  }
}

ParamSet ZerosLike(const ParamSet& like) {
  ParamSet out;
  for (const auto& e : like.entries()) {
    out.Add(e.name, DenseTensor(e.tensor.shape()));
  }
  return out;
}

ParamSet Add(const ParamSet& a, const ParamSet& b) {
  return Elementwise(a, b, "add", [](double x, double y) { return x + y; });
}

ParamSet Subtract(const ParamSet& a, const ParamSet& b) {
  return Elementwise(a, b, "subtract",
                     [](double x, double y) { return x - y; });
}

ParamSet Scale(const ParamSet& p, double c) {
  ParamSet out = p;
  for (auto& e : out.mutable_entries()) {
    for (double& v : e.tensor.mutable_values()) v *= c;
  }
  return out;
}

double L1Norm(const ParamSet& p) {
  double sum = 0.0;
  for (const auto& e : p.entries()) {
    for (double v : e.tensor.values()) sum += std::abs(v);
  }
  return sum;
}

double MaxAbs(const ParamSet& p) {
  double m = 0.0;
  for (const auto& e : p.entries()) {
    for (double v : e.tensor.values()) m = std::max(m, std::abs(v));
  }
  return m;
}

double MaxAbsDiff(const ParamSet& a, const ParamSet& b) {
  CheckConformable(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto x = a[i].tensor.values();
    auto y = b[i].tensor.values();
    for (std::size_t j = 0; j < x.size(); ++j) {
      m = std::max(m, std::abs(x[j] - y[j]));
    }
  }
  return m;
}

bool AllFinite(const ParamSet& p) {
  return std::all_of(p.entries().begin(), p.entries().end(),
                     [](const NamedTensor& e) { return e.tensor.AllFinite(); });
}

}  // namespace fedq
