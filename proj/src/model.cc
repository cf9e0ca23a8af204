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

#include "fedq/model.h"

#include <algorithm>
#include <cmath>

#include "fedq/errors.h"

namespace fedq {
namespace {

DenseTensor UniformWeight(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  std::vector<double> v(rows * cols);
  for (double& x : v) x = bound * (2.0 * Uniform01(rng) - 1.0);
  return DenseTensor({rows, cols}, std::move(v));
}

// Expected (name, shape) layout for a spec.
std::vector<std::pair<std::string, Shape>> Layout(const ModelSpec& spec) {
  const std::size_t k = static_cast<std::size_t>(spec.num_classes);
  if (spec.kind == ModelKind::kLogistic) {
    return {{"linear.weight", {k, spec.input_dim}}, {"linear.bias", {k}}};
  }
  return {{"fc1.weight", {spec.hidden_dim, spec.input_dim}},
          {"fc1.bias", {spec.hidden_dim}},
          {"fc2.weight", {k, spec.hidden_dim}},
          {"fc2.bias", {k}}};
}

void CheckParams(const ModelSpec& spec, const ParamSet& params) {
  const auto layout = Layout(spec);
  bool ok = params.size() == layout.size();
  for (std::size_t i = 0; ok && i < layout.size(); ++i) {
    ok = params[i].name == layout[i].first &&
         params[i].tensor.shape() == layout[i].second;
  }
  if (!ok) {
    throw InputError("parameter set does not match " + ToString(spec.kind) +
                     " model layout");
  }
}

// out = W x + b for W (rows x cols).
void Affine(const DenseTensor& w, const DenseTensor& b,
            std::span<const double> x, std::span<double> out) {
  const std::size_t rows = w.shape()[0];
  const std::size_t cols = w.shape()[1];
  auto wv = w.values();
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = b[r];
    const double* wr = wv.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    out[r] = acc;
  }
}

// Softmax in place, returns log-sum-exp.
double SoftmaxInPlace(std::span<double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return m + std::log(sum);
}

}  // namespace

std::string ToString(ModelKind kind) {
  return kind == ModelKind::kLogistic ? "logistic" : "mlp";
}

ModelKind ParseModelKind(const std::string& s) {
  if (s == "logistic") return ModelKind::kLogistic;
  if (s == "mlp") return ModelKind::kMlp;
  throw InputError("unknown model kind '" + s + "' (expected logistic|mlp)");
}

void ModelSpec::Validate() const {
  if (num_classes < 2) throw InputError("model needs num_classes >= 2");
  if (input_dim < 1) throw InputError("model needs input_dim >= 1");
  if (kind == ModelKind::kMlp && hidden_dim < 1) {
    throw InputError("mlp needs hidden_dim >= 1");
  }
}

ParamSet InitParams(const ModelSpec& spec, Rng& rng) {
  spec.Validate();
  ParamSet p;
  for (auto& [name, shape] : Layout(spec)) {
    if (shape.size() == 2) {
      p.Add(name, UniformWeight(shape[0], shape[1], rng));
    } else {
      p.Add(name, DenseTensor(shape));
    }
  }
  return p;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> z(logits.begin(), logits.end());
  if (!z.empty()) SoftmaxInPlace(z);
  return z;
}

std::vector<double> Logits(const ModelSpec& spec, const ParamSet& params,
                           std::span<const double> x) {
  CheckParams(spec, params);
  std::vector<double> z(static_cast<std::size_t>(spec.num_classes));
  if (spec.kind == ModelKind::kLogistic) {
    Affine(params[0].tensor, params[1].tensor, x, z);
    return z;
  }
  std::vector<double> h(spec.hidden_dim);
  Affine(params[0].tensor, params[1].tensor, x, h);
  for (double& v : h) v = std::tanh(v);
  Affine(params[2].tensor, params[3].tensor, h, z);
  return z;
}

int Predict(const ModelSpec& spec, const ParamSet& params,
            std::span<const double> x) {
  const auto z = Logits(spec, params, x);
  // max_element returns the first maximum.
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

LossAndGradient LossAndGrad(const ModelSpec& spec, const ParamSet& params,
                            const LabeledDataset& data,
                            std::span<const std::size_t> batch) {
  CheckParams(spec, params);
  if (batch.empty()) throw InputError("loss_and_grad: empty batch");
  if (data.input_dim() != spec.input_dim) {
    throw InputError("loss_and_grad: dataset input_dim does not match model");
  }
  const std::size_t k = static_cast<std::size_t>(spec.num_classes);
  const std::size_t d = spec.input_dim;

  LossAndGradient out{0.0, ZerosLike(params)};
  std::vector<double> z(k);
  double total = 0.0;

  if (spec.kind == ModelKind::kLogistic) {
    const DenseTensor& w = params[0].tensor;
    const DenseTensor& b = params[1].tensor;
    auto gw = out.grad[0].tensor.mutable_values();
    auto gb = out.grad[1].tensor.mutable_values();
    for (std::size_t i : batch) {
      if (i >= data.size()) throw InputError("loss_and_grad: bad sample index");
      const int y = data.label(i);
      if (y < 0 || static_cast<std::size_t>(y) >= k) {
        throw InputError("loss_and_grad: label " + std::to_string(y) +
                         " outside [0, " + std::to_string(k) + ")");
      }
      auto x = data.row(i);
      Affine(w, b, x, z);
      const double zy = z[static_cast<std::size_t>(y)];
      total += SoftmaxInPlace(z) - zy;
      z[static_cast<std::size_t>(y)] -= 1.0;  // dL/dz = p - onehot
      for (std::size_t r = 0; r < k; ++r) {
        gb[r] += z[r];
        double* g = gw.data() + r * d;
        for (std::size_t c = 0; c < d; ++c) g[c] += z[r] * x[c];
      }
    }
  } else {
    const std::size_t hdim = spec.hidden_dim;
    const DenseTensor& w1 = params[0].tensor;
    const DenseTensor& b1 = params[1].tensor;
    const DenseTensor& w2 = params[2].tensor;
    const DenseTensor& b2 = params[3].tensor;
    auto gw1 = out.grad[0].tensor.mutable_values();
    auto gb1 = out.grad[1].tensor.mutable_values();
    auto gw2 = out.grad[2].tensor.mutable_values();
    auto gb2 = out.grad[3].tensor.mutable_values();
    auto w2v = w2.values();
    std::vector<double> h(hdim), dh(hdim);
    for (std::size_t i : batch) {
      if (i >= data.size()) throw InputError("loss_and_grad: bad sample index");
      const int y = data.label(i);
      if (y < 0 || static_cast<std::size_t>(y) >= k) {
        throw InputError("loss_and_grad: label " + std::to_string(y) +
                         " outside [0, " + std::to_string(k) + ")");
      }
      auto x = data.row(i);
      Affine(w1, b1, x, h);
      for (double& v : h) v = std::tanh(v);
      Affine(w2, b2, h, z);
      const double zy = z[static_cast<std::size_t>(y)];
      total += SoftmaxInPlace(z) - zy;
      z[static_cast<std::size_t>(y)] -= 1.0;
      std::fill(dh.begin(), dh.end(), 0.0);
      for (std::size_t r = 0; r < k; ++r) {
        gb2[r] += z[r];
        double* g = gw2.data() + r * hdim;
        const double* wr = w2v.data() + r * hdim;
        for (std::size_t c = 0; c < hdim; ++c) {
          g[c] += z[r] * h[c];
          dh[c] += wr[c] * z[r];
        }
      }
      for (std::size_t r = 0; r < hdim; ++r) {
        const double da = dh[r] * (1.0 - h[r] * h[r]);
        gb1[r] += da;
        double* g = gw1.data() + r * d;
        for (std::size_t c = 0; c < d; ++c) g[c] += da * x[c];
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  out.loss = total * inv_n;
  for (auto& e : out.grad.mutable_entries()) {
    for (double& v : e.tensor.mutable_values()) v *= inv_n;
  }
  return out;
}

}  // namespace fedq
