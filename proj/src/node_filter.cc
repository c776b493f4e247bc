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

#include "domex/node_filter.h"

#include <algorithm>
#include <vector>

#include "domex/text.h"
#include "json.hpp"

namespace domex {

XPathStats CollectXPathStats(const SiteCorpus &site) {
  std::map<std::string, std::set<std::string>> texts;
  XPathStats stats;
  stats.site_id = site.site_id;
  for (const Page &page : site.pages) {
    std::set<std::string> seen;
    for (const DomNode &node : page.nodes) {
      texts[node.xpath].insert(NormalizeText(node.text));
      if (seen.insert(node.xpath).second) ++stats.support[node.xpath];
    }
  }
  for (const auto &[xpath, values] : texts) {
    stats.counts[xpath] = static_cast<int>(values.size());
  }
  return stats;
}

std::set<std::string> SelectVariableNodes(const XPathStats &stats, int k) {
  struct Entry {
    const std::string *xpath;
    int count;
    int support;
  };
  std::vector<Entry> entries;
  for (const auto &[xpath, count] : stats.counts) {
    if (count < 2) continue;
    auto it = stats.support.find(xpath);
    entries.push_back({&xpath, count, it == stats.support.end() ? 0 : it->second});
  }
  auto better = [](const Entry &a, const Entry &b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.support != b.support) return a.support > b.support;
    return *a.xpath < *b.xpath;
  };
  size_t keep = std::min<size_t>(entries.size(), static_cast<size_t>(std::max(k, 0)));
  std::partial_sort(entries.begin(), entries.begin() + keep, entries.end(), better);
  std::set<std::string> out;
  for (size_t i = 0; i < keep; ++i) out.insert(*entries[i].xpath);
  return out;
}

Page ApplyFilter(const Page &page, const std::set<std::string> &keep) {
  Page out;
  out.page_id = page.page_id;
  out.site_id = page.site_id;
  out.truth = page.truth;
  for (const DomNode &node : page.nodes) {
    if (!keep.count(node.xpath)) continue;
    DomNode copy = node;
    copy.ordinal = static_cast<int>(out.nodes.size());
    out.nodes.push_back(std::move(copy));
  }
  return out;
}

SiteCorpus FilterSite(const SiteCorpus &site, int k) {
  std::set<std::string> keep = SelectVariableNodes(CollectXPathStats(site), k);
  SiteCorpus out;
  out.site_id = site.site_id;
  out.vertical = site.vertical;
  out.pages.reserve(site.pages.size());
  for (const Page &page : site.pages) out.pages.push_back(ApplyFilter(page, keep));
  return out;
}

std::string XPathStatsToJson(const XPathStats &stats) {
  nlohmann::json doc;
  doc["site_id"] = stats.site_id;
  doc["xpaths"] = nlohmann::json::array();
  for (const auto &[xpath, count] : stats.counts) {
    auto it = stats.support.find(xpath);
    doc["xpaths"].push_back({{"xpath", xpath},
                             {"distinct_texts", count},
                             {"support", it == stats.support.end() ? 0 : it->second}});
  }
  return doc.dump(2);
}

}  // namespace domex
