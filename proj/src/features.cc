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

#include "domex/features.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <deque>
#include <regex>
#include <unordered_map>

#include "domex/errors.h"
#include "domex/text.h"

namespace domex {

namespace {

enum class CharClass { kSpace, kLetter, kDigit, kOther };

CharClass Classify(UChar32 c) {
  if (u_isUWhiteSpace(c)) return CharClass::kSpace;
  if (u_isdigit(c)) return CharClass::kDigit;
  if (u_isalpha(c)) return CharClass::kLetter;
  switch (u_charType(c)) {
    case U_NON_SPACING_MARK:
    case U_ENCLOSING_MARK:
    case U_COMBINING_SPACING_MARK:
      return CharClass::kLetter;
    default:
      return CharClass::kOther;
  }
}

struct TypePatterns {
  std::regex date;
  std::regex zipcode;
  std::regex url;
  std::regex currency;
  std::regex percent;
};

const TypePatterns &Patterns() {
  static const TypePatterns *p = [] {
    const std::string month =
        "(jan|feb|mar|apr|may|jun|jul|aug|sep|sept|oct|nov|dec)[a-z]*\\.?";
    auto flags = std::regex::ECMAScript | std::regex::icase | std::regex::optimize;
    return new TypePatterns{
        std::regex("\\b\\d{4}[-/.]\\d{1,2}[-/.]\\d{1,2}\\b|"
                   "\\b\\d{1,2}[-/.]\\d{1,2}[-/.]\\d{2,4}\\b|"
                   "\\b" + month + "\\s+\\d{1,2}(st|nd|rd|th)?,?\\s+\\d{4}\\b|"
                   "\\b\\d{1,2}(st|nd|rd|th)?\\s+" + month + ",?\\s+\\d{4}\\b|"
                   "\\b" + month + ",?\\s+\\d{4}\\b",
                   flags),
        std::regex("(^|[^0-9-])\\d{5}(-\\d{4})?($|[^0-9-])", flags),
        std::regex("https?://|www\\.|\\b[a-z0-9-]+\\.(com|org|net|edu|gov|io)\\b", flags),
        std::regex("\\$|\xE2\x82\xAC|\xC2\xA3|\xC2\xA5|\\b(usd|eur|gbp|dollars?)\\b", flags),
        std::regex("%|\\bpercent\\b", flags),
    };
  }();
  return *p;
}

std::vector<std::string> RankByCount(const std::map<std::string, int> &counts,
                                     int min_count) {
  std::vector<std::pair<std::string, int>> items;
  for (const auto &[key, n] : counts) {
    if (n >= min_count) items.emplace_back(key, n);
  }
  std::stable_sort(items.begin(), items.end(), [](const auto &a, const auto &b) {
    return a.second > b.second;
  });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto &item : items) out.push_back(std::move(item.first));
  return out;
}

std::vector<TokenIds> MapTokens(const std::vector<std::string> &tokens,
                                const Vocab &vocab, size_t cap) {
  std::vector<TokenIds> out;
  for (size_t i = 0; i < tokens.size() && i < cap; ++i) {
    out.push_back(MapToken(tokens[i], vocab));
  }
  return out;
}

void DiscreteFeatures(const DomNode &node, const Vocab &vocab,
                      NodeFeatureBundle *bundle) {
  bundle->tag_features = {vocab.TagId(vocab.LeafTagFeature(node.leaf_tag))};
  for (const std::string &f : StringTypeFeatures(node.text)) {
    bundle->type_features.push_back(vocab.TypeId(f));
  }
  std::sort(bundle->type_features.begin(), bundle->type_features.end());
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::string lower = ToLower(text);
  std::vector<std::string> tokens;
  const auto *s = reinterpret_cast<const uint8_t *>(lower.data());
  const int32_t length = static_cast<int32_t>(lower.size());
  std::string current;
  CharClass current_class = CharClass::kSpace;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  int32_t i = 0;
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    CharClass cls = c < 0 ? CharClass::kOther : Classify(c);
    if (cls == CharClass::kSpace) {
      flush();
    } else if (cls == CharClass::kOther) {
      flush();
      tokens.emplace_back(lower.substr(start, i - start));
    } else {
      if (cls != current_class) flush();
      current.append(lower, start, i - start);
    }
    current_class = cls;
  }
  flush();
  return tokens;
}

std::vector<std::string> PrecedingTokens(const Page &page, int ordinal, int window) {
  std::vector<std::string> all;
  for (int i = 0; i < ordinal && i < static_cast<int>(page.nodes.size()); ++i) {
    for (std::string &t : Tokenize(page.nodes[i].text)) all.push_back(std::move(t));
  }
  size_t start = all.size() > static_cast<size_t>(window) ? all.size() - window : 0;
  return {all.begin() + static_cast<std::ptrdiff_t>(start), all.end()};
}

std::set<std::string> StringTypeFeatures(std::string_view text) {
  const TypePatterns &p = Patterns();
  const std::string s(text);
  std::set<std::string> out;
  if (std::any_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    out.insert("HAS_NUMBER");
  }
  if (std::regex_search(s, p.date)) out.insert("HAS_DATE");
  if (std::regex_search(s, p.zipcode)) out.insert("HAS_ZIPCODE");
  if (std::regex_search(s, p.url)) out.insert("HAS_URL");
  if (std::regex_search(s, p.currency)) out.insert("HAS_CURRENCY");
  if (std::regex_search(s, p.percent)) out.insert("HAS_PERCENT");

  bool has_letter = false, has_lower = false;
  const auto *b = reinterpret_cast<const uint8_t *>(s.data());
  const int32_t length = static_cast<int32_t>(s.size());
  int words = 0;
  bool in_word = false;
  for (int32_t i = 0; i < length;) {
    UChar32 c;
    U8_NEXT(b, i, length, c);
    if (c < 0) continue;
    if (u_isalpha(c)) {
      has_letter = true;
      if (u_islower(c)) has_lower = true;
    }
    bool space = u_isUWhiteSpace(c);
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  if (has_letter && !has_lower) out.insert("ALL_CAPS");
  if (words >= 1 && words <= 3) out.insert("IS_SHORT");
  return out;
}

Vocab Vocab::Build(const std::vector<SiteCorpus> &seed_sites, int min_count) {
  std::map<std::string, int> word_counts, char_counts, tag_counts;
  size_t nodes = 0;
  for (const SiteCorpus &site : seed_sites) {
    for (const Page &page : site.pages) {
      for (const DomNode &node : page.nodes) {
        ++nodes;
        ++tag_counts[node.leaf_tag];
        for (const std::string &token : Tokenize(node.text)) {
          ++word_counts[token];
          for (const std::string &ch : SplitCodePoints(token)) ++char_counts[ch];
        }
      }
    }
  }
  if (nodes == 0) throw Error(ErrorKind::kEmptyCorpus, "seed sites contain no nodes");
  Vocab vocab;
  vocab.words_ = {"<oov>", "<pad>"};
  vocab.chars_ = {"<oov>", "<pad>"};
  vocab.tags_ = {kOtherTag};
  for (std::string &w : RankByCount(word_counts, min_count)) vocab.words_.push_back(std::move(w));
  for (std::string &c : RankByCount(char_counts, 1)) vocab.chars_.push_back(std::move(c));
  std::vector<std::string> tags = RankByCount(tag_counts, 1);
  if (tags.size() > kTopTags) tags.resize(kTopTags);
  for (std::string &t : tags) vocab.tags_.push_back(std::move(t));
  vocab.Index();
  return vocab;
}

void Vocab::Index() {
  word_ids_.clear();
  char_ids_.clear();
  tag_ids_.clear();
  for (size_t i = 2; i < words_.size(); ++i) word_ids_[words_[i]] = static_cast<int>(i);
  for (size_t i = 2; i < chars_.size(); ++i) char_ids_[chars_[i]] = static_cast<int>(i);
  for (size_t i = 0; i < tags_.size(); ++i) tag_ids_[tags_[i]] = static_cast<int>(i);
}

int Vocab::WordId(const std::string &token) const {
  auto it = word_ids_.find(token);
  return it == word_ids_.end() ? kOov : it->second;
}

int Vocab::CharId(const std::string &ch) const {
  auto it = char_ids_.find(ch);
  return it == char_ids_.end() ? kOov : it->second;
}

int Vocab::TypeId(const std::string &feature) const {
  for (int i = 0; i < kNumTypeFeatures; ++i) {
    if (feature == kTypeFeatures[i]) return i;
  }
  throw Error(ErrorKind::kIndexOutOfRange, "unknown type feature " + feature);
}

int Vocab::TagId(const std::string &feature) const {
  auto it = tag_ids_.find(feature);
  return it == tag_ids_.end() ? 0 : it->second;
}

std::string Vocab::LeafTagFeature(const std::string &leaf_tag) const {
  return tag_ids_.count(leaf_tag) ? leaf_tag : std::string(kOtherTag);
}

nlohmann::json Vocab::ToJson() const {
  return {{"words", words_}, {"chars", chars_}, {"tags", tags_}};
}

Vocab Vocab::FromJson(const nlohmann::json &j) {
  Vocab vocab;
  vocab.words_ = j.at("words").get<std::vector<std::string>>();
  vocab.chars_ = j.at("chars").get<std::vector<std::string>>();
  vocab.tags_ = j.at("tags").get<std::vector<std::string>>();
  if (vocab.words_.size() < 2 || vocab.chars_.size() < 2 || vocab.tags_.empty()) {
    throw Error(ErrorKind::kBadFormat, "vocabulary tables are truncated");
  }
  vocab.Index();
  return vocab;
}

TokenIds MapToken(const std::string &token, const Vocab &vocab) {
  TokenIds ids;
  ids.word = vocab.WordId(token);
  for (const std::string &ch : SplitCodePoints(token)) {
    if (ids.chars.size() >= static_cast<size_t>(kCharCap)) break;
    ids.chars.push_back(vocab.CharId(ch));
  }
  return ids;
}

NodeFeatureBundle Featurize(const Page &page, int ordinal, const Vocab &vocab,
                            const Page *raw) {
  const DomNode &node = page.nodes.at(ordinal);
  NodeFeatureBundle bundle;
  bundle.node_tokens = MapTokens(Tokenize(node.text), vocab, kNodeTokenCap);
  std::vector<std::string> prev = PrecedingTokens(page, ordinal);
  if (prev.empty() && raw != nullptr) {
    int raw_ordinal = raw->FindXPath(node.xpath);
    if (raw_ordinal > 0) prev = PrecedingTokens(*raw, raw_ordinal);
  }
  bundle.prev_tokens = MapTokens(prev, vocab, kPrevWindow);
  DiscreteFeatures(node, vocab, &bundle);
  return bundle;
}

std::vector<NodeFeatureBundle> FeaturizePage(const Page &page, const Vocab &vocab,
                                             const Page *raw) {
  std::vector<NodeFeatureBundle> out;
  out.reserve(page.nodes.size());
  std::deque<TokenIds> window;
  for (size_t i = 0; i < page.nodes.size(); ++i) {
    const DomNode &node = page.nodes[i];
    std::vector<std::string> tokens = Tokenize(node.text);
    NodeFeatureBundle bundle;
    bundle.node_tokens = MapTokens(tokens, vocab, kNodeTokenCap);
    if (window.empty() && raw != nullptr) {
      int raw_ordinal = raw->FindXPath(node.xpath);
      if (raw_ordinal > 0) {
        bundle.prev_tokens = MapTokens(PrecedingTokens(*raw, raw_ordinal), vocab, kPrevWindow);
      }
    } else {
      bundle.prev_tokens.assign(window.begin(), window.end());
    }
    DiscreteFeatures(node, vocab, &bundle);
    out.push_back(std::move(bundle));
    for (const std::string &t : tokens) {
      window.push_back(MapToken(t, vocab));
      if (window.size() > static_cast<size_t>(kPrevWindow)) window.pop_front();
    }
  }
  return out;
}

}  // namespace domex
