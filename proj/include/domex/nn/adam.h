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

#ifndef DOMEX_NN_ADAM_H_
#define DOMEX_NN_ADAM_H_

#include <vector>

#include "domex/nn/tensor.h"

namespace domex::nn {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

// Bias-corrected Adam over every parameter of a set:
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
//   p <- p - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
class Adam {
 public:
  explicit Adam(ParameterSet *params, AdamConfig config = {});

  // Applies one update from the accumulated gradients, then zeroes them.
  // Throws Error(kNonFiniteValue) if a gradient or updated value is not
  // finite.
  void Step();

  int step() const { return step_; }
  const AdamConfig &config() const { return config_; }

 private:
  ParameterSet *params_;
  AdamConfig config_;
  int step_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace domex::nn

#endif  // DOMEX_NN_ADAM_H_
