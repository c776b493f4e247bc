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

#include "domex/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "domex/errors.h"
#include "domex/html.h"
#include "domex/text.h"
#include "json.hpp"

namespace domex {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::string_view kCorpusMagic = "DOMEX-CORPUS-1";

// Walks the element tree in document order and emits one node per element
// with direct text. An element's text is emitted where its first
// non-blank text chunk occurs, before any later child elements.
class LeafCollector {
 public:
  explicit LeafCollector(const HtmlDocument &doc) : doc_(doc) {}

  std::vector<DomNode> Collect() {
    const HtmlNode &root = doc_.node(doc_.root());
    Visit(doc_.root(), "/" + root.tag + "[1]");
    return std::move(nodes_);
  }

 private:
  void Visit(int index, const std::string &xpath) {
    const HtmlNode &element = doc_.node(index);
    std::string direct;
    for (int child : element.children) {
      const HtmlNode &c = doc_.node(child);
      if (!c.is_element()) {
        direct += ' ';
        direct += c.text;
      }
    }
    std::string text = NormalizeText(direct);
    bool emitted = text.empty();
    std::map<std::string, int> counts;
    for (int child : element.children) {
      const HtmlNode &c = doc_.node(child);
      if (!c.is_element()) {
        if (!emitted && !NormalizeText(c.text).empty()) {
          DomNode node;
          node.xpath = xpath;
          node.text = text;
          node.leaf_tag = element.tag;
          node.ordinal = static_cast<int>(nodes_.size());
          nodes_.push_back(std::move(node));
          emitted = true;
        }
        continue;
      }
      int position = ++counts[c.tag];
      Visit(child, xpath + "/" + c.tag + "[" + std::to_string(position) + "]");
    }
  }

  const HtmlDocument &doc_;
  std::vector<DomNode> nodes_;
};

std::string StripSiteSuffix(const std::string &dir_name) {
  if (!dir_name.empty() && dir_name.back() == ')') {
    size_t open = dir_name.rfind('(');
    if (open != std::string::npos && open > 0) return dir_name.substr(0, open);
  }
  return dir_name;
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos
                                                             : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

bool IsInteger(const std::string &s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

fs::path FindTruthFile(const fs::path &root, const std::string &vertical,
                       const std::string &site, const std::string &field) {
  const std::string name = site + "-" + field + ".txt";
  for (const fs::path &candidate :
       {root / vertical / "groundtruth" / name, root / "groundtruth" / vertical / name,
        root / "groundtruth" / vertical / (vertical + "-" + name)}) {
    if (fs::exists(candidate)) return candidate;
  }
  return {};
}

}  // namespace

int VerticalSchema::FieldIndex(std::string_view name) const {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void VerticalSchema::Validate() const {
  if (fields.empty()) {
    throw Error(ErrorKind::kBadFormat, "schema needs at least one field");
  }
  std::set<std::string> seen;
  for (const std::string &f : fields) {
    if (f.empty() || !seen.insert(f).second) {
      throw Error(ErrorKind::kBadFormat, "empty or duplicate field name '" + f + "'");
    }
  }
}

int Page::FindXPath(std::string_view xpath) const {
  for (const DomNode &node : nodes) {
    if (node.xpath == xpath) return node.ordinal;
  }
  return -1;
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path &path, std::string_view data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

Page ParsePage(std::string_view html, const std::string &page_id,
               const std::string &site_id) {
  std::string utf8 = DecodeHtmlBytes(html);
  HtmlDocument doc = ParseHtml(utf8);
  Page page;
  page.page_id = page_id;
  page.site_id = site_id;
  page.nodes = LeafCollector(doc).Collect();
  return page;
}

std::vector<SiteCorpus> LoadVertical(const fs::path &root,
                                     const VerticalSchema &schema,
                                     LoadReport *report) {
  schema.Validate();
  const fs::path vertical_dir = root / schema.vertical_name;
  if (!fs::is_directory(vertical_dir)) {
    throw Error(ErrorKind::kCorpusEmpty, "no directory " + vertical_dir.string());
  }
  std::vector<std::pair<std::string, fs::path>> site_dirs;
  for (const auto &entry : fs::directory_iterator(vertical_dir)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name == "groundtruth") continue;
    site_dirs.emplace_back(StripSiteSuffix(name), entry.path());
  }
  std::sort(site_dirs.begin(), site_dirs.end());
  if (site_dirs.empty()) {
    throw Error(ErrorKind::kCorpusEmpty, "no site directories in " + vertical_dir.string());
  }

  std::vector<SiteCorpus> sites;
  for (const auto &[site_id, dir] : site_dirs) {
    SiteCorpus site;
    site.site_id = site_id;
    site.vertical = schema;
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(dir)) {
      const std::string ext = entry.path().extension().string();
      if (entry.is_regular_file() && (ext == ".htm" || ext == ".html")) {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    std::map<std::string, size_t> by_id;
    for (const fs::path &file : files) {
      Page page = ParsePage(ReadFile(file), file.stem().string(), site_id);
      for (const std::string &field : schema.fields) page.truth[field];
      by_id[page.page_id] = site.pages.size();
      site.pages.push_back(std::move(page));
    }

    for (const std::string &field : schema.fields) {
      fs::path truth_path = FindTruthFile(root, schema.vertical_name, site_id, field);
      if (truth_path.empty()) {
        if (report) report->missing_truth_files.push_back(site_id + "/" + field);
        continue;
      }
      std::istringstream in(ReadFile(truth_path));
      std::string line;
      bool header = true;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (header) {
          header = false;
          continue;
        }
        std::vector<std::string> cols = SplitTabs(line);
        if (cols.size() < 2 || !IsInteger(cols[1])) continue;
        auto it = by_id.find(cols[0]);
        if (it == by_id.end()) {
          throw Error(ErrorKind::kMissingPage,
                      "page '" + cols[0] + "' of site '" + site_id +
                          "' is listed in " + truth_path.string() +
                          " but missing on disk");
        }
        std::set<std::string> &values = site.pages[it->second].truth[field];
        for (size_t c = 2; c < cols.size(); ++c) {
          if (cols[c] == "<NULL>") continue;
          std::string v = NormalizeText(cols[c]);
          if (!v.empty()) values.insert(std::move(v));
        }
      }
    }
    sites.push_back(std::move(site));
  }
  return sites;
}

TruthMatch MatchTruthNodes(const Page &page, const VerticalSchema &schema) {
  const int k = schema.num_fields();
  TruthMatch match;
  match.field_nodes.assign(k, {});
  std::vector<std::set<std::string>> wanted(k);
  for (int f = 0; f < k; ++f) {
    auto it = page.truth.find(schema.fields[f]);
    if (it == page.truth.end()) continue;
    for (const std::string &v : it->second) wanted[f].insert(NormalizeText(v));
  }
  for (size_t i = 0; i < page.nodes.size(); ++i) {
    const std::string text = NormalizeText(page.nodes[i].text);
    int hits = 0;
    for (int f = 0; f < k; ++f) {
      if (!wanted[f].count(text)) continue;
      if (hits++ == 0) match.field_nodes[f].push_back(static_cast<int>(i));
    }
    if (hits > 1) ++match.conflicts;
  }
  for (int f = 0; f < k; ++f) {
    if (!wanted[f].empty() && match.field_nodes[f].empty()) ++match.unmatched_fields;
  }
  return match;
}

std::vector<int> NodeLabels(const Page &page, const VerticalSchema &schema) {
  const int k = schema.num_fields();
  std::vector<int> labels(page.nodes.size(), k);
  TruthMatch match = MatchTruthNodes(page, schema);
  for (int f = 0; f < k; ++f) {
    for (int i : match.field_nodes[f]) labels[i] = f;
  }
  return labels;
}

std::string SerializeCorpus(const std::vector<SiteCorpus> &sites) {
  json doc;
  doc["version"] = 1;
  json &out_sites = doc["sites"] = json::array();
  for (const SiteCorpus &site : sites) {
    json s;
    s["site_id"] = site.site_id;
    s["vertical"] = {{"name", site.vertical.vertical_name},
                     {"fields", site.vertical.fields}};
    json &pages = s["pages"] = json::array();
    for (const Page &page : site.pages) {
      json p;
      p["page_id"] = page.page_id;
      json &nodes = p["nodes"] = json::array();
      for (const DomNode &n : page.nodes) {
        nodes.push_back({n.xpath, n.text, n.leaf_tag, n.ordinal});
      }
      p["truth"] = json::object();
      for (const auto &[field, values] : page.truth) p["truth"][field] = values;
      pages.push_back(std::move(p));
    }
    out_sites.push_back(std::move(s));
  }
  return std::string(kCorpusMagic) + "\n" + doc.dump() + "\n";
}

std::vector<SiteCorpus> DeserializeCorpus(std::string_view bytes) {
  if (bytes.substr(0, kCorpusMagic.size()) != kCorpusMagic ||
      bytes.size() <= kCorpusMagic.size() || bytes[kCorpusMagic.size()] != '\n') {
    throw Error(ErrorKind::kBadFormat, "not a DOMEX-CORPUS-1 container");
  }
  std::vector<SiteCorpus> sites;
  try {
    json doc = json::parse(bytes.substr(kCorpusMagic.size() + 1));
    for (const json &s : doc.at("sites")) {
      SiteCorpus site;
      site.site_id = s.at("site_id").get<std::string>();
      site.vertical.vertical_name = s.at("vertical").at("name").get<std::string>();
      site.vertical.fields = s.at("vertical").at("fields").get<std::vector<std::string>>();
      for (const json &p : s.at("pages")) {
        Page page;
        page.page_id = p.at("page_id").get<std::string>();
        page.site_id = site.site_id;
        for (const json &n : p.at("nodes")) {
          page.nodes.push_back({n.at(0).get<std::string>(), n.at(1).get<std::string>(),
                                n.at(2).get<std::string>(), n.at(3).get<int>()});
        }
        for (const auto &[field, values] : p.at("truth").items()) {
          page.truth[field] = values.get<std::set<std::string>>();
        }
        site.pages.push_back(std::move(page));
      }
      sites.push_back(std::move(site));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kBadFormat, std::string("corrupt corpus cache: ") + e.what());
  }
  return sites;
}

}  // namespace domex
