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

// Page-level scoring of top-1 extractions.
//
// For each field, a page with a prediction is correct when the normalized
// predicted text equals one of the page's normalized truth values. Then
//
//   precision = correct / pages with a prediction   (0 with no predictions)
//   recall    = correct / pages with truth          (0 with no truth)
//   f1        = harmonic mean                       (0 when both are 0)
//
// and the vertical score is the unweighted mean of the field F1 values.

#ifndef DOMEX_METRICS_H_
#define DOMEX_METRICS_H_

#include <string>
#include <vector>

#include "domex/corpus.h"
#include "json.hpp"

namespace domex {

struct PredictionRow {
  std::string site_id;
  std::string page_id;
  std::string field;
  std::string xpath;
  std::string text;
  std::string stage;  // "1", "2" or "voted"
};

struct FieldMetrics {
  std::string field;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int pages_with_truth = 0;
  int pages_with_prediction = 0;
  int pages_correct = 0;
};

struct MetricsReport {
  std::vector<FieldMetrics> fields;  // schema order
  double macro_f1 = 0.0;

  const FieldMetrics &Field(const std::string &name) const;
  nlohmann::json ToJson() const;
};

// |pages| carry the truth; rows name pages by (site_id, page_id). Throws
// Error(kDuplicatePrediction) for two rows with the same page and field.
MetricsReport PageLevelF1(const std::vector<PredictionRow> &rows,
                          const std::vector<const Page *> &pages, const VerticalSchema &schema);

}  // namespace domex

#endif  // DOMEX_METRICS_H_
