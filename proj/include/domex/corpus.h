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

// Pages, sites and verticals: parsing HTML into text-bearing leaf nodes,
// loading a vertical from disk and aligning ground truth to nodes.
//
// On-disk layout of a vertical:
//
//   <root>/<vertical>/<site>/<page_id>.htm          (also .html)
//   <root>/<vertical>/groundtruth/<site>-<field>.txt
//
// A site directory may carry a "(N)" suffix, as in the public SWDE release
// ("auto-aol(2000)"); the suffix is not part of the site id. Truth files are
// also looked up under <root>/groundtruth/<vertical>/. Each truth file has
// one header line followed by rows
//
//   page_id <TAB> count <TAB> value_1 <TAB> value_2 ...
//
// Rows whose count column is not an integer are skipped, and the literal
// value "<NULL>" means the field is absent on that page.

#ifndef DOMEX_CORPUS_H_
#define DOMEX_CORPUS_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace domex {

struct VerticalSchema {
  std::string vertical_name;
  std::vector<std::string> fields;  // K fields; None is implicit

  int num_fields() const { return static_cast<int>(fields.size()); }
  int FieldIndex(std::string_view name) const;  // -1 when unknown

  // Throws Error(kBadFormat) unless K >= 1 and names are unique.
  void Validate() const;
};

struct DomNode {
  std::string xpath;     // e.g. /html[1]/body[1]/div[2]/span[1]
  std::string text;      // normalized, never empty
  std::string leaf_tag;  // tag of the element owning the text
  int ordinal = 0;       // position in the page's node list

  bool operator==(const DomNode &) const = default;
};

struct Page {
  std::string page_id;
  std::string site_id;
  std::vector<DomNode> nodes;  // document order
  std::map<std::string, std::set<std::string>> truth;  // field -> values

  // Index of the node with this xpath, or -1.
  int FindXPath(std::string_view xpath) const;
};

struct SiteCorpus {
  std::string site_id;
  VerticalSchema vertical;
  std::vector<Page> pages;
};

// Diagnostics collected while loading a vertical.
struct LoadReport {
  std::vector<std::string> missing_truth_files;  // "<site>/<field>"
};

// Parses raw HTML bytes into a page with empty truth.
Page ParsePage(std::string_view html, const std::string &page_id,
               const std::string &site_id);

// Loads every site of |schema.vertical_name| under |root|, sorted by
// site id. Missing truth files leave the field empty and are listed in
// |report|. Throws kCorpusEmpty, kMissingPage, kUnreadableInput, kIo.
std::vector<SiteCorpus> LoadVertical(const std::filesystem::path &root,
                                     const VerticalSchema &schema,
                                     LoadReport *report = nullptr);

struct TruthMatch {
  std::vector<std::vector<int>> field_nodes;  // per field, node indices
  int conflicts = 0;          // nodes matching more than one field
  int unmatched_fields = 0;   // fields with truth but no matching node
};

// Exact match after normalization. A node matching several fields goes to
// the earliest field in schema order.
TruthMatch MatchTruthNodes(const Page &page, const VerticalSchema &schema);

// Per-node class labels: field index, or K for None.
std::vector<int> NodeLabels(const Page &page, const VerticalSchema &schema);

// Corpus cache: the line "DOMEX-CORPUS-1" followed by a JSON document.
std::string SerializeCorpus(const std::vector<SiteCorpus> &sites);
std::vector<SiteCorpus> DeserializeCorpus(std::string_view bytes);

std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view data);

}  // namespace domex

#endif  // DOMEX_CORPUS_H_
