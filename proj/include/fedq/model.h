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

// Desk-scale softmax classifiers with analytic gradients.
//
// Two architectures are supported:
//
//   logistic:  z = W x + b                       {linear.weight, linear.bias}
//   mlp:       h = tanh(W1 x + b1), z = W2 h + b2 {fc1.weight, fc1.bias,
//                                                  fc2.weight, fc2.bias}
//
// Weight matrices are (out x in), row-major. The loss is the mean softmax
// cross-entropy over a batch.

#ifndef FEDQ_MODEL_H_
#define FEDQ_MODEL_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fedq/dataset.h"
#include "fedq/rng.h"
#include "fedq/tensor.h"

namespace fedq {

enum class ModelKind { kLogistic, kMlp };

std::string ToString(ModelKind kind);
// Accepts "logistic" or "mlp"; throws InputError otherwise.
ModelKind ParseModelKind(const std::string& s);

struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  std::size_t input_dim = 1;
  std::size_t hidden_dim = 0;  // mlp only
  int num_classes = 2;

  // Throws InputError unless K >= 2 and every used dimension is >= 1.
  void Validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Weights ~ U[-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
ParamSet InitParams(const ModelSpec& spec, Rng& rng);

struct LossAndGradient {
  double loss = 0.0;
  ParamSet grad;
};

// Mean cross-entropy over the samples `batch` of `data`, and its exact
// gradient. Throws InputError for an empty batch, a label >= K, or a
// parameter set that does not match `spec`.
LossAndGradient LossAndGrad(const ModelSpec& spec, const ParamSet& params,
                            const LabeledDataset& data,
                            std::span<const std::size_t> batch);

// Class logits for one input row.
std::vector<double> Logits(const ModelSpec& spec, const ParamSet& params,
                           std::span<const double> x);

// Numerically stable softmax.
std::vector<double> Softmax(std::span<const double> logits);

// argmax of the logits; ties go to the lowest class index.
int Predict(const ModelSpec& spec, const ParamSet& params,
            std::span<const double> x);

}  // namespace fedq

#endif  // FEDQ_MODEL_H_
