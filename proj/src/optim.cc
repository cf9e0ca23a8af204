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

#include "fedq/optim.h"

#include <cmath>

#include "fedq/errors.h"

namespace fedq {

ParamSet ClipGradientL1(const ParamSet& grad, double xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    throw InputError("clip bound xi must be finite and > 0");
  }
  const double norm = L1Norm(grad);
  if (norm <= xi) return grad;
  ParamSet out = Scale(grad, xi / norm);
  // Rounding in the rescale can leave the norm a few ulps above xi, which
  // would also make clipping non-idempotent. Shrink until it is inside.
  double factor = 1.0;
  while (L1Norm(out) > xi) {
    factor = std::nextafter(factor, 0.0);
    out = Scale(grad, (xi / norm) * factor);
  }
  return out;
}

ParamSet SgdStep(const ParamSet& params, const ParamSet& grad, double eta) {
  if (!(eta > 0.0)) throw InputError("learning rate eta must be > 0");
  CheckConformable(params, grad, "sgd_step");
  ParamSet out = params;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto p = out[i].tensor.mutable_values();
    auto g = grad[i].tensor.values();
    for (std::size_t j = 0; j < p.size(); ++j) p[j] -= eta * g[j];
  }
  return out;
}

}  // namespace fedq
