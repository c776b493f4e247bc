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

#include "domex/metrics.h"

#include <map>
#include <set>
#include <tuple>

#include "domex/errors.h"
#include "domex/text.h"

namespace domex {

const FieldMetrics &MetricsReport::Field(const std::string &name) const {
  for (const FieldMetrics &m : fields) {
    if (m.field == name) return m;
  }
  throw Error(ErrorKind::kUsage, "no metrics for field " + name);
}

nlohmann::json MetricsReport::ToJson() const {
  nlohmann::json j;
  j["macro_f1"] = macro_f1;
  j["fields"] = nlohmann::json::array();
  for (const FieldMetrics &m : fields) {
    j["fields"].push_back({{"field", m.field},
                           {"precision", m.precision},
                           {"recall", m.recall},
                           {"f1", m.f1},
                           {"pages_with_truth", m.pages_with_truth},
                           {"pages_with_prediction", m.pages_with_prediction},
                           {"pages_correct", m.pages_correct}});
  }
  return j;
}

MetricsReport PageLevelF1(const std::vector<PredictionRow> &rows,
                          const std::vector<const Page *> &pages, const VerticalSchema &schema) {
  std::map<std::pair<std::string, std::string>, const Page *> by_key;
  for (const Page *p : pages) by_key[{p->site_id, p->page_id}] = p;

  const int k = schema.num_fields();
  MetricsReport report;
  report.fields.resize(k);
  for (int f = 0; f < k; ++f) report.fields[f].field = schema.fields[f];

  for (const Page *p : pages) {
    for (int f = 0; f < k; ++f) {
      auto it = p->truth.find(schema.fields[f]);
      if (it != p->truth.end() && !it->second.empty()) ++report.fields[f].pages_with_truth;
    }
  }

  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const PredictionRow &row : rows) {
    const int f = schema.FieldIndex(row.field);
    if (f < 0) throw Error(ErrorKind::kUsage, "prediction for unknown field " + row.field);
    if (!seen.insert({row.site_id, row.page_id, row.field}).second) {
      throw Error(ErrorKind::kDuplicatePrediction,
                  row.site_id + "/" + row.page_id + " has two predictions for " + row.field);
    }
    FieldMetrics &m = report.fields[f];
    ++m.pages_with_prediction;
    auto page = by_key.find({row.site_id, row.page_id});
    if (page == by_key.end()) continue;
    auto truth = page->second->truth.find(row.field);
    if (truth == page->second->truth.end()) continue;
    const std::string predicted = NormalizeText(row.text);
    for (const std::string &value : truth->second) {
      if (NormalizeText(value) == predicted) {
        ++m.pages_correct;
        break;
      }
    }
  }

  double sum = 0.0;
  for (FieldMetrics &m : report.fields) {
    m.precision = m.pages_with_prediction ? static_cast<double>(m.pages_correct) /
                                                m.pages_with_prediction
                                          : 0.0;
    m.recall = m.pages_with_truth ? static_cast<double>(m.pages_correct) / m.pages_with_truth
                                  : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    sum += m.f1;
  }
  report.macro_f1 = k ? sum / k : 0.0;
  return report;
}

}  // namespace domex
