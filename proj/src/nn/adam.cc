// Copyright 2026 The Domex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "domex/nn/adam.h"

#include <cmath>

#include "domex/errors.h"

namespace domex::nn {

Adam::Adam(ParameterSet *params, AdamConfig config) : params_(params), config_(config) {
  for (const Parameter &p : params_->params()) {
    m_.emplace_back(p.value.shape());
    v_.emplace_back(p.value.shape());
  }
}

void Adam::Step() {
  ++step_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, step_);
  const double c2 = 1.0 - std::pow(b2, step_);
  size_t index = 0;
  for (Parameter &p : params_->params()) {
    CheckFinite(p.grad, ("adam_step gradient of " + p.name).c_str());
    Tensor &m = m_.at(index);
    Tensor &v = v_.at(index);
    ++index;
    double *value = p.value.data();
    double *grad = p.grad.data();
    for (size_t i = 0; i < p.value.size(); ++i) {
      const double g = grad[i];
      m[i] = b1 * m[i] + (1.0 - b1) * g;
      v[i] = b2 * v[i] + (1.0 - b2) * g * g;
      value[i] -= config_.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.epsilon);
      grad[i] = 0.0;
    }
    CheckFinite(p.value, ("adam_step value of " + p.name).c_str());
  }
}

}  // namespace domex::nn
