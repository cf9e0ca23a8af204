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

#ifndef FEDQ_OPTIM_H_
#define FEDQ_OPTIM_H_

#include "fedq/tensor.h"

namespace fedq {

// Scales `grad` by min(1, xi / ||grad||_1) so that the result has L1 norm at
// most xi. Gradients already inside the bound are returned untouched.
// Throws InputError unless xi > 0.
ParamSet ClipGradientL1(const ParamSet& grad, double xi);

// params - eta * grad. Throws InputError on a shape mismatch or eta <= 0.
ParamSet SgdStep(const ParamSet& params, const ParamSet& grad, double eta);

}  // namespace fedq

#endif  // FEDQ_OPTIM_H_
