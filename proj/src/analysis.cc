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

#include "domex/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "domex/errors.h"

namespace domex {

nlohmann::json DistanceMatrix::ToJson() const {
  return {{"site", site_id}, {"fields", fields}, {"raw", raw}, {"scaled", scaled},
          {"support", support}};
}

DistanceMatrix ComputeDistanceMatrix(const SiteCorpus &site, const VerticalSchema &schema) {
  const int k = schema.num_fields();
  DistanceMatrix out;
  out.site_id = site.site_id;
  out.fields = schema.fields;
  out.raw.assign(k, std::vector<double>(k, 0.0));
  out.support.assign(k, std::vector<int>(k, 0));

  for (const Page &page : site.pages) {
    if (page.nodes.empty()) continue;
    const TruthMatch match = MatchTruthNodes(page, schema);
    const double size = static_cast<double>(page.nodes.size());
    for (int r = 0; r < k; ++r) {
      if (match.field_nodes[r].empty()) continue;
      for (int c = 0; c < k; ++c) {
        if (match.field_nodes[c].empty()) continue;
        out.raw[r][c] += (match.field_nodes[c].front() - match.field_nodes[r].front()) / size;
        ++out.support[r][c];
      }
    }
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      if (out.support[r][c] > 0) out.raw[r][c] /= out.support[r][c];
      lo = std::min(lo, out.raw[r][c]);
      hi = std::max(hi, out.raw[r][c]);
    }
  }
  out.scaled.assign(k, std::vector<double>(k, 0.0));
  if (hi > lo) {
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) out.scaled[r][c] = 2.0 * (out.raw[r][c] - lo) / (hi - lo) - 1.0;
    }
  }
  return out;
}

double Pearson(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size()) throw Error(ErrorKind::kShapeMismatch, "pearson needs equal lengths");
  const size_t n = x.size();
  if (n == 0) return 0.0;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double MatrixCorrelation(const DistanceMatrix &a, const DistanceMatrix &b) {
  if (a.fields != b.fields) throw Error(ErrorKind::kShapeMismatch, "matrices over different fields");
  std::vector<double> x, y;
  const size_t k = a.fields.size();
  for (size_t r = 0; r < k; ++r) {
    for (size_t c = 0; c < k; ++c) {
      if (r == c || a.support[r][c] == 0 || b.support[r][c] == 0) continue;
      x.push_back(a.scaled[r][c]);
      y.push_back(b.scaled[r][c]);
    }
  }
  return Pearson(x, y);
}

}  // namespace domex
