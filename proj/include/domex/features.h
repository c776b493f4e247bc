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

// Node features: node-text tokens with their characters, the preceding
// token window, and two bags of discrete features (leaf tag, string type).

#ifndef DOMEX_FEATURES_H_
#define DOMEX_FEATURES_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "domex/corpus.h"
#include "json.hpp"

namespace domex {

constexpr int kNodeTokenCap = 32;
constexpr int kCharCap = 24;
constexpr int kPrevWindow = 10;
constexpr int kTopTags = 30;

inline constexpr const char *kOtherTag = "OTHER_TAG";

// String type detectors, in discrete-table order:
//   HAS_NUMBER    [0-9]
//   HAS_DATE      yyyy-mm-dd, mm/dd/yyyy (any of - / .), "June 1, 2000",
//                 "1 June 2000", "June 2000"
//   HAS_ZIPCODE   a standalone 5-digit group, optionally -dddd
//   HAS_URL       http(s)://, www., or a name ending in .com/.org/.net/...
//   HAS_CURRENCY  $ € £ ¥ or usd/eur/gbp/dollar(s)
//   HAS_PERCENT   % or the word "percent"
//   ALL_CAPS      has letters and no lowercase letter
//   IS_SHORT      at most 3 whitespace-separated words
inline constexpr const char *kTypeFeatures[] = {
    "HAS_NUMBER",   "HAS_DATE",    "HAS_ZIPCODE", "HAS_URL",
    "HAS_CURRENCY", "HAS_PERCENT", "ALL_CAPS",    "IS_SHORT"};
constexpr int kNumTypeFeatures = 8;

// Lowercases, splits on whitespace, and splits letter runs, digit runs and
// single punctuation/symbol characters into separate tokens.
std::vector<std::string> Tokenize(std::string_view text);

// Last |window| tokens of the nodes before |ordinal|, in document order.
std::vector<std::string> PrecedingTokens(const Page &page, int ordinal,
                                         int window = kPrevWindow);

std::set<std::string> StringTypeFeatures(std::string_view text);

struct TokenIds {
  int word = 0;
  std::vector<int> chars;

  bool operator==(const TokenIds &) const = default;
};

struct NodeFeatureBundle {
  std::vector<TokenIds> node_tokens;
  std::vector<TokenIds> prev_tokens;
  std::vector<int> tag_features;   // ids into the tag table
  std::vector<int> type_features;  // ids into the type table

  bool operator==(const NodeFeatureBundle &) const = default;
};

class Vocab {
 public:
  static constexpr int kOov = 0;
  static constexpr int kPad = 1;

  // Builds word, character and tag tables from seed sites. Throws
  // Error(kEmptyCorpus) when the sites hold no nodes.
  static Vocab Build(const std::vector<SiteCorpus> &seed_sites, int min_count = 2);

  int WordId(const std::string &token) const;
  int CharId(const std::string &ch) const;
  int TypeId(const std::string &feature) const;
  int TagId(const std::string &feature) const;

  // The tag itself when it is among the most frequent seed tags, otherwise
  // OTHER_TAG.
  std::string LeafTagFeature(const std::string &leaf_tag) const;

  int num_words() const { return static_cast<int>(words_.size()); }
  int num_chars() const { return static_cast<int>(chars_.size()); }
  int num_tags() const { return static_cast<int>(tags_.size()); }
  int num_types() const { return kNumTypeFeatures; }

  const std::vector<std::string> &words() const { return words_; }
  const std::vector<std::string> &chars() const { return chars_; }
  const std::vector<std::string> &tags() const { return tags_; }

  nlohmann::json ToJson() const;
  static Vocab FromJson(const nlohmann::json &j);

  bool operator==(const Vocab &other) const {
    return words_ == other.words_ && chars_ == other.chars_ && tags_ == other.tags_;
  }

 private:
  void Index();

  std::vector<std::string> words_;  // id order; 0 OOV, 1 pad
  std::vector<std::string> chars_;
  std::vector<std::string> tags_;   // 0 is OTHER_TAG
  std::map<std::string, int> word_ids_;
  std::map<std::string, int> char_ids_;
  std::map<std::string, int> tag_ids_;
};

TokenIds MapToken(const std::string &token, const Vocab &vocab);

// Features for one node. When the node has no preceding retained tokens and
// |raw| (the unfiltered page) is given, the window is taken from |raw|.
NodeFeatureBundle Featurize(const Page &page, int ordinal, const Vocab &vocab,
                            const Page *raw = nullptr);

// Same as calling Featurize for every node, in linear time.
std::vector<NodeFeatureBundle> FeaturizePage(const Page &page, const Vocab &vocab,
                                             const Page *raw = nullptr);

}  // namespace domex

#endif  // DOMEX_FEATURES_H_
