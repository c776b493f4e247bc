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

#include "domex/nn/ops.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "domex/errors.h"

namespace domex::nn {

namespace {

void Require(bool ok, const char *op, const std::string &what) {
  if (!ok) throw Error(ErrorKind::kShapeMismatch, std::string(op) + ": " + what);
}

Var Emit(Graph &g, Tensor out, const char *op) {
  CheckFinite(out, op);
  return g.Add(std::move(out));
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Var EmbedLookup(Graph &g, Parameter &table, const std::vector<int> &ids) {
  const int vocab = table.value.dim(0);
  const int d = table.value.dim(1);
  const int n = static_cast<int>(ids.size());
  Tensor out({n, d});
  for (int i = 0; i < n; ++i) {
    if (ids[i] < 0 || ids[i] >= vocab) {
      throw Error(ErrorKind::kIndexOutOfRange,
                  "embed_lookup: id " + std::to_string(ids[i]) + " outside " + table.name);
    }
    std::copy_n(table.value.data() + static_cast<size_t>(ids[i]) * d, d,
                out.data() + static_cast<size_t>(i) * d);
  }
  Var y = Emit(g, std::move(out), "embed_lookup");
  g.OnBackward(y, [&g, &table, ids, y, d] {
    const Tensor &dy = g.grad(y);
    for (size_t i = 0; i < ids.size(); ++i) {
      double *row = table.grad.data() + static_cast<size_t>(ids[i]) * d;
      const double *src = dy.data() + i * d;
      for (int j = 0; j < d; ++j) row[j] += src[j];
    }
  });
  return y;
}

Var Conv1dMaxPool(Graph &g, Var x, Parameter &filters, Parameter &bias) {
  const Tensor &in = g.value(x);
  Require(filters.value.ndim() == 3, "conv1d_maxpool", "filters must be 3-d");
  const int kernel = filters.value.dim(0);
  const int d = filters.value.dim(1);
  const int f = filters.value.dim(2);
  const int n = in.rows();
  Require(in.ndim() == 2 && in.cols() == d, "conv1d_maxpool",
          "input " + ShapeString(in.shape()) + " vs filters " + ShapeString(filters.value.shape()));
  Require(n >= 1, "conv1d_maxpool", "empty input");
  Require(bias.value.size() == static_cast<size_t>(f), "conv1d_maxpool", "bias size");

  const int pad_left = (kernel - 1) / 2;
  // One window per input position: padded length n + kernel - 1.
  auto cols = std::make_shared<Matrix>(Matrix::Zero(n, kernel * d));
  ConstMatrixMap xin = in.matrix();
  for (int t = 0; t < n; ++t) {
    for (int k = 0; k < kernel; ++k) {
      int src = t + k - pad_left;
      if (src < 0 || src >= n) continue;
      cols->block(t, k * d, 1, d) = xin.row(src);
    }
  }
  ConstMatrixMap fm(filters.value.data(), kernel * d, f);
  Matrix full = (*cols) * fm;
  full.rowwise() += ConstMatrixMap(bias.value.data(), 1, f).row(0);

  Tensor out({f});
  auto argmax = std::make_shared<std::vector<int>>(f, 0);
  for (int j = 0; j < f; ++j) {
    int best = 0;
    for (int t = 1; t < n; ++t) {
      if (full(t, j) > full(best, j)) best = t;
    }
    (*argmax)[j] = best;
    out[j] = full(best, j);
  }
  Var y = Emit(g, std::move(out), "conv1d_maxpool");
  g.OnBackward(y, [&g, &filters, &bias, x, y, cols, argmax, kernel, d, f, n, pad_left] {
    const Tensor &dy = g.grad(y);
    MatrixMap dfm(filters.grad.data(), kernel * d, f);
    ConstMatrixMap fm(filters.value.data(), kernel * d, f);
    Matrix dcols = Matrix::Zero(n, kernel * d);
    for (int j = 0; j < f; ++j) {
      const int t = (*argmax)[j];
      dfm.col(j) += cols->row(t).transpose() * dy[j];
      bias.grad[j] += dy[j];
      dcols.row(t) += dy[j] * fm.col(j).transpose();
    }
    MatrixMap dx = g.grad(x).matrix();
    for (int t = 0; t < n; ++t) {
      for (int k = 0; k < kernel; ++k) {
        int src = t + k - pad_left;
        if (src < 0 || src >= n) continue;
        dx.row(src) += dcols.block(t, k * d, 1, d);
      }
    }
  });
  return y;
}

Var Lstm(Graph &g, Var x, const LstmWeights &weights, bool reverse) {
  const Tensor &in = g.value(x);
  Parameter &w = *weights.w;
  Parameter &u = *weights.u;
  Parameter &b = *weights.b;
  const int h = weights.hidden();
  const int d = w.value.dim(0);
  const int n = in.rows();
  Require(in.ndim() == 2 && in.cols() == d, "lstm",
          "input " + ShapeString(in.shape()) + " vs w " + ShapeString(w.value.shape()));
  Require(n >= 1, "lstm", "empty input");
  Require(w.value.cols() == 4 * h && u.value.cols() == 4 * h &&
              b.value.size() == static_cast<size_t>(4 * h),
          "lstm", "gate dimensions");

  struct Cache {
    Matrix gates;  // activated i, f, g, o per step
    Matrix cell;
    Matrix tanh_cell;
    std::vector<int> order;
  };
  auto cache = std::make_shared<Cache>();
  ConstMatrixMap wm = w.value.cmatrix();
  ConstMatrixMap um = u.value.cmatrix();
  Matrix z = in.matrix() * wm;
  z.rowwise() += ConstMatrixMap(b.value.data(), 1, 4 * h).row(0);
  cache->gates.resize(n, 4 * h);
  cache->cell.resize(n, h);
  cache->tanh_cell.resize(n, h);
  cache->order.resize(n);
  for (int s = 0; s < n; ++s) cache->order[s] = reverse ? n - 1 - s : s;

  Tensor out({n, h});
  MatrixMap hs = out.matrix();
  RowVector h_prev = RowVector::Zero(h);
  RowVector c_prev = RowVector::Zero(h);
  for (int s = 0; s < n; ++s) {
    const int t = cache->order[s];
    RowVector pre = z.row(t) + h_prev * um;
    for (int j = 0; j < h; ++j) {
      const double ig = Sigmoid(pre[j]);
      const double fg = Sigmoid(pre[h + j]);
      const double gg = std::tanh(pre[2 * h + j]);
      const double og = Sigmoid(pre[3 * h + j]);
      const double c = fg * c_prev[j] + ig * gg;
      const double tc = std::tanh(c);
      cache->gates(t, j) = ig;
      cache->gates(t, h + j) = fg;
      cache->gates(t, 2 * h + j) = gg;
      cache->gates(t, 3 * h + j) = og;
      cache->cell(t, j) = c;
      cache->tanh_cell(t, j) = tc;
      hs(t, j) = og * tc;
    }
    h_prev = hs.row(t);
    c_prev = cache->cell.row(t);
  }
  Var y = Emit(g, std::move(out), "lstm");
  g.OnBackward(y, [&g, &w, &u, &b, x, y, cache, n, h] {
    const Tensor &out = g.value(y);
    ConstMatrixMap hs = out.matrix();
    ConstMatrixMap dy = g.grad(y).cmatrix();
    ConstMatrixMap um = u.value.cmatrix();
    Matrix dz(n, 4 * h);
    RowVector dh_next = RowVector::Zero(h);
    RowVector dc_next = RowVector::Zero(h);
    MatrixMap du = u.grad.matrix();
    for (int s = n - 1; s >= 0; --s) {
      const int t = cache->order[s];
      const int prev = s > 0 ? cache->order[s - 1] : -1;
      RowVector dh = dy.row(t) + dh_next;
      for (int j = 0; j < h; ++j) {
        const double ig = cache->gates(t, j);
        const double fg = cache->gates(t, h + j);
        const double gg = cache->gates(t, 2 * h + j);
        const double og = cache->gates(t, 3 * h + j);
        const double tc = cache->tanh_cell(t, j);
        const double c_prev = prev >= 0 ? cache->cell(prev, j) : 0.0;
        const double d_o = dh[j] * tc;
        const double dc = dh[j] * og * (1.0 - tc * tc) + dc_next[j];
        dz(t, j) = dc * gg * ig * (1.0 - ig);
        dz(t, h + j) = dc * c_prev * fg * (1.0 - fg);
        dz(t, 2 * h + j) = dc * ig * (1.0 - gg * gg);
        dz(t, 3 * h + j) = d_o * og * (1.0 - og);
        dc_next[j] = dc * fg;
      }
      if (prev >= 0) du.noalias() += hs.row(prev).transpose() * dz.row(t);
      dh_next = dz.row(t) * um.transpose();
    }
    const Tensor &in = g.value(x);
    w.grad.matrix().noalias() += in.matrix().transpose() * dz;
    MatrixMap(b.grad.data(), 1, 4 * h) += dz.colwise().sum();
    g.grad(x).matrix().noalias() += dz * w.value.matrix().transpose();
  });
  return y;
}

Var BiLstmAvg(Graph &g, Var x, const LstmWeights &forward, const LstmWeights &backward) {
  Var f = Lstm(g, x, forward, false);
  Var b = Lstm(g, x, backward, true);
  return MeanRows(g, ConcatCols(g, f, b));
}

Var Dense(Graph &g, Var x, Parameter &w, Parameter &b, Activation act) {
  const Tensor &in = g.value(x);
  const int d_in = w.value.dim(0);
  const int d_out = w.value.dim(1);
  Require(in.cols() == d_in, "dense",
          "input " + ShapeString(in.shape()) + " vs w " + ShapeString(w.value.shape()));
  Require(b.value.size() == static_cast<size_t>(d_out), "dense", "bias size");
  std::vector<int> shape = in.shape();
  shape.back() = d_out;
  Tensor out(shape);
  MatrixMap om = out.matrix();
  om.noalias() = in.matrix() * w.value.matrix();
  om.rowwise() += ConstMatrixMap(b.value.data(), 1, d_out).row(0);
  if (act == Activation::kRelu) {
    for (double &v : out.values()) v = std::max(v, 0.0);
  }
  Var y = Emit(g, std::move(out), "dense");
  g.OnBackward(y, [&g, &w, &b, x, y, act, d_out] {
    Matrix dpre = g.grad(y).matrix();
    if (act == Activation::kRelu) {
      ConstMatrixMap om = g.value(y).matrix();
      dpre.array() *= (om.array() > 0.0).cast<double>();
    }
    ConstMatrixMap in = g.value(x).matrix();
    w.grad.matrix().noalias() += in.transpose() * dpre;
    MatrixMap(b.grad.data(), 1, d_out) += dpre.colwise().sum();
    g.grad(x).matrix().noalias() += dpre * w.value.matrix().transpose();
  });
  return y;
}

std::vector<double> Softmax(const double *logits, int n) {
  std::vector<double> p(n);
  if (n == 0) return p;
  const double m = *std::max_element(logits, logits + n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += p[i] = std::exp(logits[i] - m);
  for (double &v : p) v /= sum;
  return p;
}

int ArgMax(const std::vector<double> &v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

Var SoftmaxXent(Graph &g, Var logits, int target) {
  const Tensor &z = g.value(logits);
  const int c = static_cast<int>(z.size());
  if (target < 0 || target >= c) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "softmax_xent: target " + std::to_string(target) + " of " + std::to_string(c));
  }
  auto probs = std::make_shared<std::vector<double>>(Softmax(z.data(), c));
  const double m = *std::max_element(z.values().begin(), z.values().end());
  double lse = 0.0;
  for (double v : z.values()) lse += std::exp(v - m);
  Tensor out({1});
  out[0] = m + std::log(lse) - z[target];
  Var y = Emit(g, std::move(out), "softmax_xent");
  g.OnBackward(y, [&g, logits, y, probs, target] {
    const double dy = g.grad(y)[0];
    Tensor &dz = g.grad(logits);
    for (size_t i = 0; i < probs->size(); ++i) {
      dz[i] += dy * ((*probs)[i] - (static_cast<int>(i) == target ? 1.0 : 0.0));
    }
  });
  return y;
}

Var Dropout(Graph &g, Var x, double rate, bool train, Rng &rng) {
  if (!train || rate <= 0.0) return x;
  const Tensor &in = g.value(x);
  const double scale = 1.0 / (1.0 - rate);
  auto mask = std::make_shared<std::vector<double>>(in.size());
  Tensor out(in.shape());
  for (size_t i = 0; i < in.size(); ++i) {
    (*mask)[i] = rng.Uniform() < rate ? 0.0 : scale;
    out[i] = in[i] * (*mask)[i];
  }
  Var y = Emit(g, std::move(out), "dropout");
  g.OnBackward(y, [&g, x, y, mask] {
    const Tensor &dy = g.grad(y);
    Tensor &dx = g.grad(x);
    for (size_t i = 0; i < mask->size(); ++i) dx[i] += dy[i] * (*mask)[i];
  });
  return y;
}

Var Concat(Graph &g, const std::vector<Var> &parts) {
  std::vector<double> values;
  for (Var p : parts) {
    const auto &v = g.value(p).values();
    values.insert(values.end(), v.begin(), v.end());
  }
  Var y = Emit(g, Tensor::FromVector(std::move(values)), "concat");
  g.OnBackward(y, [&g, parts, y] {
    const Tensor &dy = g.grad(y);
    size_t offset = 0;
    for (Var p : parts) {
      const size_t n = g.value(p).size();
      if (n == 0) continue;
      Tensor &dp = g.grad(p);
      for (size_t i = 0; i < n; ++i) dp[i] += dy[offset + i];
      offset += n;
    }
  });
  return y;
}

Var ConcatCols(Graph &g, Var a, Var b) {
  const Tensor &ta = g.value(a);
  const Tensor &tb = g.value(b);
  Require(ta.rows() == tb.rows(), "concat_cols", "row counts differ");
  const int n = ta.rows(), p = ta.cols(), q = tb.cols();
  Tensor out({n, p + q});
  MatrixMap om = out.matrix();
  om.leftCols(p) = ta.matrix();
  om.rightCols(q) = tb.matrix();
  Var y = Emit(g, std::move(out), "concat_cols");
  g.OnBackward(y, [&g, a, b, y, p, q] {
    ConstMatrixMap dy = g.grad(y).cmatrix();
    g.grad(a).matrix() += dy.leftCols(p);
    g.grad(b).matrix() += dy.rightCols(q);
  });
  return y;
}

Var MeanRows(Graph &g, Var x) {
  const Tensor &in = g.value(x);
  const int n = in.rows(), d = in.cols();
  Require(n >= 1, "mean_rows", "empty input");
  Tensor out({d});
  MatrixMap(out.data(), 1, d) = in.matrix().colwise().mean();
  Var y = Emit(g, std::move(out), "mean_rows");
  g.OnBackward(y, [&g, x, y, n, d] {
    ConstMatrixMap dy(g.grad(y).data(), 1, d);
    g.grad(x).matrix().rowwise() += dy.row(0) / static_cast<double>(n);
  });
  return y;
}

Var MaxRows(Graph &g, Var x) {
  const Tensor &in = g.value(x);
  const int n = in.rows(), d = in.cols();
  Tensor out({d});
  if (n == 0) return g.Constant(std::move(out));
  auto argmax = std::make_shared<std::vector<int>>(d, 0);
  ConstMatrixMap m = in.matrix();
  for (int j = 0; j < d; ++j) {
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (m(i, j) > m(best, j)) best = i;
    }
    (*argmax)[j] = best;
    out[j] = m(best, j);
  }
  Var y = Emit(g, std::move(out), "max_rows");
  g.OnBackward(y, [&g, x, y, argmax, d] {
    const Tensor &dy = g.grad(y);
    Tensor &dx = g.grad(x);
    for (int j = 0; j < d; ++j) dx[static_cast<size_t>((*argmax)[j]) * d + j] += dy[j];
  });
  return y;
}

Var StackRows(Graph &g, const std::vector<Var> &rows) {
  Require(!rows.empty(), "stack_rows", "no rows");
  const int d = static_cast<int>(g.value(rows[0]).size());
  const int n = static_cast<int>(rows.size());
  Tensor out({n, d});
  for (int i = 0; i < n; ++i) {
    const Tensor &r = g.value(rows[i]);
    Require(r.size() == static_cast<size_t>(d), "stack_rows", "row sizes differ");
    std::copy(r.values().begin(), r.values().end(), out.data() + static_cast<size_t>(i) * d);
  }
  Var y = Emit(g, std::move(out), "stack_rows");
  g.OnBackward(y, [&g, rows, y, d] {
    const Tensor &dy = g.grad(y);
    for (size_t i = 0; i < rows.size(); ++i) {
      Tensor &dr = g.grad(rows[i]);
      for (int j = 0; j < d; ++j) dr[j] += dy[i * d + j];
    }
  });
  return y;
}

Var MeanOf(Graph &g, const std::vector<Var> &scalars) {
  Require(!scalars.empty(), "mean_of", "no inputs");
  double sum = 0.0;
  for (Var s : scalars) sum += g.value(s)[0];
  Tensor out({1});
  out[0] = sum / static_cast<double>(scalars.size());
  Var y = Emit(g, std::move(out), "mean_of");
  g.OnBackward(y, [&g, scalars, y] {
    const double share = g.grad(y)[0] / static_cast<double>(scalars.size());
    for (Var s : scalars) g.grad(s)[0] += share;
  });
  return y;
}

}  // namespace domex::nn
