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

#include "domex/nn/tensor.h"

#include <cmath>
#include <functional>
#include <numeric>

#include "domex/errors.h"

namespace domex::nn {

Tensor::Tensor(std::vector<int> shape, double fill) : shape_(std::move(shape)) {
  size_t n = 1;
  for (int d : shape_) {
    if (d < 0) throw Error(ErrorKind::kShapeMismatch, "negative dimension");
    n *= static_cast<size_t>(d);
  }
  values_.assign(n, fill);
}

Tensor Tensor::FromVector(std::vector<double> values) {
  Tensor t;
  t.shape_ = {static_cast<int>(values.size())};
  t.values_ = std::move(values);
  return t;
}

Tensor Tensor::FromMatrix(int rows, int cols, std::vector<double> values) {
  if (values.size() != static_cast<size_t>(rows) * cols) {
    throw Error(ErrorKind::kShapeMismatch, "matrix value count");
  }
  Tensor t;
  t.shape_ = {rows, cols};
  t.values_ = std::move(values);
  return t;
}

void Tensor::Fill(double value) { std::fill(values_.begin(), values_.end(), value); }

bool Tensor::AllFinite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string ShapeString(const std::vector<int> &shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

void CheckFinite(const Tensor &t, const char *op) {
  if (!t.AllFinite()) {
    throw Error(ErrorKind::kNonFiniteValue, std::string("non-finite output in ") + op);
  }
}

Parameter &ParameterSet::Add(const std::string &name, std::vector<int> shape) {
  if (Find(name) != nullptr) {
    throw Error(ErrorKind::kUsage, "duplicate parameter name " + name);
  }
  Parameter &p = params_.emplace_back();
  p.name = name;
  p.value = Tensor(shape);
  p.grad = Tensor(std::move(shape));
  return p;
}

Parameter *ParameterSet::Find(const std::string &name) {
  for (Parameter &p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Parameter *ParameterSet::Find(const std::string &name) const {
  for (const Parameter &p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Parameter &ParameterSet::Get(const std::string &name) {
  Parameter *p = Find(name);
  if (p == nullptr) throw Error(ErrorKind::kBadFormat, "missing parameter " + name);
  return *p;
}

const Parameter &ParameterSet::Get(const std::string &name) const {
  const Parameter *p = Find(name);
  if (p == nullptr) throw Error(ErrorKind::kBadFormat, "missing parameter " + name);
  return *p;
}

void ParameterSet::ZeroGrad() {
  for (Parameter &p : params_) p.grad.Fill(0.0);
}

void InitUniform(Parameter &p, double scale, Rng &rng) {
  for (double &v : p.value.values()) v = rng.Uniform(-scale, scale);
}

}  // namespace domex::nn
