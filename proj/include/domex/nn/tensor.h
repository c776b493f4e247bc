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

#ifndef DOMEX_NN_TENSOR_H_
#define DOMEX_NN_TENSOR_H_

#include <Eigen/Core>
#include <deque>
#include <string>
#include <vector>

#include "domex/rng.h"

namespace domex::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

// Dense row-major array of doubles. For linear algebra a tensor is viewed as
// a matrix whose column count is the last dimension.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, double fill = 0.0);

  static Tensor FromVector(std::vector<double> values);
  static Tensor FromMatrix(int rows, int cols, std::vector<double> values);

  const std::vector<int> &shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_.at(i); }
  size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  int cols() const { return shape_.empty() ? 1 : shape_.back(); }
  int rows() const {
    return cols() == 0 ? 0 : static_cast<int>(values_.size() / cols());
  }

  double *data() { return values_.data(); }
  const double *data() const { return values_.data(); }
  std::vector<double> &values() { return values_; }
  const std::vector<double> &values() const { return values_; }

  double &operator[](size_t i) { return values_[i]; }
  double operator[](size_t i) const { return values_[i]; }

  MatrixMap matrix() { return MatrixMap(values_.data(), rows(), cols()); }
  ConstMatrixMap matrix() const { return ConstMatrixMap(values_.data(), rows(), cols()); }
  ConstMatrixMap cmatrix() const { return matrix(); }

  void Fill(double value);
  bool AllFinite() const;

  bool operator==(const Tensor &) const = default;

 private:
  std::vector<int> shape_;
  std::vector<double> values_;
};

std::string ShapeString(const std::vector<int> &shape);

// Throws Error(kNonFiniteValue) naming |op| if |t| holds NaN or Inf.
void CheckFinite(const Tensor &t, const char *op);

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

// Named parameters in insertion order. Addresses stay valid as parameters
// are added.
class ParameterSet {
 public:
  Parameter &Add(const std::string &name, std::vector<int> shape);
  Parameter *Find(const std::string &name);
  const Parameter *Find(const std::string &name) const;
  Parameter &Get(const std::string &name);
  const Parameter &Get(const std::string &name) const;

  std::deque<Parameter> &params() { return params_; }
  const std::deque<Parameter> &params() const { return params_; }
  size_t size() const { return params_.size(); }

  void ZeroGrad();

 private:
  std::deque<Parameter> params_;
};

void InitUniform(Parameter &p, double scale, Rng &rng);

}  // namespace domex::nn

#endif  // DOMEX_NN_TENSOR_H_
