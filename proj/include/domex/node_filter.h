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

// Site-level boilerplate removal. Template text (navigation, labels,
// footers) sits at the same xpath with the same text on every page of a
// site; value nodes show at least two distinct texts.

#ifndef DOMEX_NODE_FILTER_H_
#define DOMEX_NODE_FILTER_H_

#include <map>
#include <set>
#include <string>

#include "domex/corpus.h"

namespace domex {

struct XPathStats {
  std::string site_id;
  std::map<std::string, int> counts;   // xpath -> distinct normalized texts
  std::map<std::string, int> support;  // xpath -> pages containing it
};

XPathStats CollectXPathStats(const SiteCorpus &site);

// Top-k xpaths by distinct-text count among those with count >= 2. Ties go
// to higher support, then to the lexicographically smaller xpath.
std::set<std::string> SelectVariableNodes(const XPathStats &stats, int k = 500);

// Keeps nodes whose xpath is in |keep|, preserving order and renumbering
// ordinals from 0.
Page ApplyFilter(const Page &page, const std::set<std::string> &keep);

// Stats, selection and filtering for every page of one site.
SiteCorpus FilterSite(const SiteCorpus &site, int k = 500);

std::string XPathStatsToJson(const XPathStats &stats);

}  // namespace domex

#endif  // DOMEX_NODE_FILTER_H_
