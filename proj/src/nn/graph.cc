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

#include "domex/nn/graph.h"

#include "domex/errors.h"

namespace domex::nn {

Var Graph::Constant(Tensor value) { return Add(std::move(value)); }

Var Graph::Add(Tensor value) {
  Node &node = nodes_.emplace_back();
  node.value = std::move(value);
  return Var{static_cast<int>(nodes_.size()) - 1};
}

void Graph::OnBackward(Var v, std::function<void()> fn) {
  nodes_.at(v.id).backward = std::move(fn);
}

Tensor &Graph::grad(Var v) {
  Node &node = nodes_.at(v.id);
  if (!node.grad_live) {
    node.grad = Tensor(node.value.shape());
    node.grad_live = true;
  }
  return node.grad;
}

void Graph::Backward(Var loss) {
  if (value(loss).size() != 1) {
    throw Error(ErrorKind::kShapeMismatch, "backward needs a scalar loss");
  }
  grad(loss)[0] = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node &node = nodes_[id];
    if (node.grad_live && node.backward) node.backward();
  }
}

}  // namespace domex::nn
