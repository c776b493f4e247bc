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

// Field layout analysis over labeled sites.

#ifndef DOMEX_ANALYSIS_H_
#define DOMEX_ANALYSIS_H_

#include <string>
#include <vector>

#include "domex/corpus.h"
#include "json.hpp"

namespace domex {

// raw[r][c] is the mean over pages of
//   (ordinal of field c's node - ordinal of field r's node) / page size
// using the first node matching each field and skipping pages where
// either field has no matching node. scaled is raw min-max mapped onto
// [-1, 1]; it is all zeros when every entry is equal.
struct DistanceMatrix {
  std::string site_id;
  std::vector<std::string> fields;
  std::vector<std::vector<double>> raw;
  std::vector<std::vector<double>> scaled;
  std::vector<std::vector<int>> support;  // pages contributing to each entry

  nlohmann::json ToJson() const;
};

DistanceMatrix ComputeDistanceMatrix(const SiteCorpus &site, const VerticalSchema &schema);

// Pearson correlation of the scaled off-diagonal entries supported in
// both matrices. Returns 0 when either side has zero variance.
double MatrixCorrelation(const DistanceMatrix &a, const DistanceMatrix &b);

double Pearson(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace domex

#endif  // DOMEX_ANALYSIS_H_
