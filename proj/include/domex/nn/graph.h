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

// Tape-based reverse-mode differentiation over coarse layer ops.
//
// A Graph records one forward computation. Each op appends a node with its
// output value and a closure that propagates the node's gradient to its
// inputs. Trainable weights are not graph nodes: ops read Parameter values
// directly and accumulate into Parameter::grad during Backward.

#ifndef DOMEX_NN_GRAPH_H_
#define DOMEX_NN_GRAPH_H_

#include <deque>
#include <functional>
#include <vector>

#include "domex/nn/tensor.h"
#include "domex/rng.h"

namespace domex::nn {

struct Var {
  int id = -1;
};

class Graph {
 public:
  Graph() = default;
  Graph(const Graph &) = delete;
  Graph &operator=(const Graph &) = delete;

  // Leaf holding |value|; gradients reaching it are kept but not propagated.
  Var Constant(Tensor value);

  Var Add(Tensor value);
  void OnBackward(Var v, std::function<void()> fn);

  const Tensor &value(Var v) const { return nodes_[v.id].value; }

  // Gradient of |v|, allocated as zeros on first access.
  Tensor &grad(Var v);
  bool has_grad(Var v) const { return nodes_[v.id].grad_live; }

  // Seeds d(loss)/d(loss) = 1 for a single-element |loss| and runs every
  // recorded closure in reverse order.
  void Backward(Var loss);

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool grad_live = false;
    std::function<void()> backward;
  };
  std::deque<Node> nodes_;
};

}  // namespace domex::nn

#endif  // DOMEX_NN_GRAPH_H_
