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

// Layer ops. Every op validates shapes (kShapeMismatch), checks that its
// output is finite (kNonFiniteValue) and records its backward closure.

#ifndef DOMEX_NN_OPS_H_
#define DOMEX_NN_OPS_H_

#include <vector>

#include "domex/nn/graph.h"
#include "domex/nn/tensor.h"
#include "domex/rng.h"

namespace domex::nn {

enum class Activation { kNone, kRelu };

// Rows of |table| [V x d] selected by |ids|, as [n x d].
Var EmbedLookup(Graph &g, Parameter &table, const std::vector<int> &ids);

// Convolution of x [n x d] with filters [kernel x d x F] over the sequence
// zero-padded by (kernel-1)/2 on the left and the rest on the right, plus
// bias [F], then max over time. Returns [F].
Var Conv1dMaxPool(Graph &g, Var x, Parameter &filters, Parameter &bias);

// Weights of one LSTM direction: w [d x 4h], u [h x 4h], b [4h], gate
// blocks ordered input, forget, cell, output.
struct LstmWeights {
  Parameter *w = nullptr;
  Parameter *u = nullptr;
  Parameter *b = nullptr;
  int hidden() const { return u->value.dim(0); }
};

// Per-step hidden states [n x h]; |reverse| runs from the last step to the
// first and writes outputs back at their original positions.
Var Lstm(Graph &g, Var x, const LstmWeights &weights, bool reverse);

// Mean over time of [forward ; backward] hidden states. Returns [2h].
Var BiLstmAvg(Graph &g, Var x, const LstmWeights &forward, const LstmWeights &backward);

// x [d_in] or [n x d_in] times w [d_in x d_out] plus b [d_out].
Var Dense(Graph &g, Var x, Parameter &w, Parameter &b, Activation act);

// Softmax cross-entropy of logits [C] against |target|. Returns a scalar [1].
Var SoftmaxXent(Graph &g, Var logits, int target);

// Inverted dropout; identity when !train or rate == 0.
Var Dropout(Graph &g, Var x, double rate, bool train, Rng &rng);

// Flat concatenation of the inputs' values.
Var Concat(Graph &g, const std::vector<Var> &parts);

// [n x p] and [n x q] to [n x (p+q)].
Var ConcatCols(Graph &g, Var a, Var b);

// [n x d] to [d]; n must be positive.
Var MeanRows(Graph &g, Var x);

// Elementwise max over rows of [n x d]; zeros for n == 0.
Var MaxRows(Graph &g, Var x);

// [d] vectors to [n x d].
Var StackRows(Graph &g, const std::vector<Var> &rows);

// Mean of scalar nodes.
Var MeanOf(Graph &g, const std::vector<Var> &scalars);

// Numerically stable softmax of a flat vector.
std::vector<double> Softmax(const double *logits, int n);

// Lowest index of the maximum.
int ArgMax(const std::vector<double> &v);

}  // namespace domex::nn

#endif  // DOMEX_NN_OPS_H_
