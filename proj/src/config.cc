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

#include "domex/config.h"

#include <charconv>
#include <functional>
#include <sstream>

#include "domex/corpus.h"
#include "domex/errors.h"

namespace domex {

namespace {

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

int ToInt(const std::string &key, const std::string &v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorKind::kUsage, key + " expects an integer, got '" + v + "'");
  }
  return out;
}

uint64_t ToUint64(const std::string &key, const std::string &v) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorKind::kUsage, key + " expects an unsigned integer, got '" + v + "'");
  }
  return out;
}

double ToDouble(const std::string &key, const std::string &v) {
  try {
    size_t used = 0;
    double out = std::stod(v, &used);
    if (used == v.size()) return out;
  } catch (const std::exception &) {
  }
  throw Error(ErrorKind::kUsage, key + " expects a number, got '" + v + "'");
}

bool ToBool(const std::string &key, const std::string &v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorKind::kUsage, key + " expects on/off, got '" + v + "'");
}

using Setter = std::function<void(ExperimentSpec *, const std::string &, const std::string &)>;

const std::map<std::string, Setter> &Setters() {
  static const std::map<std::string, Setter> *setters = [] {
    auto *m = new std::map<std::string, Setter>;
    auto &s = *m;
#define DOMEX_INT(key, member) \
  s[key] = [](ExperimentSpec *e, const std::string &k, const std::string &v) { e->member = ToInt(k, v); }
#define DOMEX_DOUBLE(key, member) \
  s[key] = [](ExperimentSpec *e, const std::string &k, const std::string &v) { e->member = ToDouble(k, v); }
    s["vertical"] = [](ExperimentSpec *e, const std::string &, const std::string &v) {
      e->schema.vertical_name = v;
    };
    s["fields"] = [](ExperimentSpec *e, const std::string &, const std::string &v) {
      e->schema.fields = SplitList(v);
    };
    s["sites"] = [](ExperimentSpec *e, const std::string &, const std::string &v) {
      e->site_order = SplitList(v);
    };
    s["seed"] = [](ExperimentSpec *e, const std::string &k, const std::string &v) {
      e->seed = ToUint64(k, v);
    };
    s["word_vectors"] = [](ExperimentSpec *e, const std::string &, const std::string &v) {
      e->word_vectors = v;
    };
    s["voting"] = [](ExperimentSpec *e, const std::string &k, const std::string &v) {
      e->voting = ToBool(k, v);
    };
    DOMEX_INT("filter_k", filter_k);
    DOMEX_INT("k", k);
    DOMEX_INT("permutation", permutation);
    DOMEX_INT("stage", stage);
    DOMEX_DOUBLE("vote_fraction", vote_fraction);
    DOMEX_INT("node.dim_char", node.dim_char);
    DOMEX_INT("node.dim_word", node.dim_word);
    DOMEX_INT("node.cnn_filters", node.cnn_filters);
    DOMEX_INT("node.cnn_kernel", node.cnn_kernel);
    DOMEX_INT("node.lstm_hidden_node_text", node.lstm_hidden_node_text);
    DOMEX_INT("node.lstm_hidden_prev_text", node.lstm_hidden_prev_text);
    DOMEX_INT("node.dim_tag", node.dim_tag);
    DOMEX_INT("node.dim_type", node.dim_type);
    DOMEX_INT("node.mlp_hidden", node.mlp_hidden);
    DOMEX_DOUBLE("node.dropout", node.dropout);
    DOMEX_INT("node.epochs", node.epochs);
    DOMEX_INT("node.batch_size", node.batch_size);
    DOMEX_DOUBLE("node.learning_rate", node.learning_rate);
    DOMEX_INT("relation.dim_xpath_tag", relation.dim_xpath_tag);
    DOMEX_INT("relation.xpath_lstm_hidden", relation.xpath_lstm_hidden);
    DOMEX_INT("relation.dim_pos", relation.dim_pos);
    DOMEX_INT("relation.pos_range", relation.pos_range);
    DOMEX_INT("relation.mlp_hidden", relation.mlp_hidden);
    DOMEX_DOUBLE("relation.dropout", relation.dropout);
    DOMEX_INT("relation.epochs", relation.epochs);
    DOMEX_INT("relation.batch_size", relation.batch_size);
    DOMEX_INT("relation.vote_threshold", relation.vote_threshold);
    DOMEX_INT("relation.m", relation.m);
    DOMEX_DOUBLE("relation.demote_prob", relation.demote_prob);
    DOMEX_DOUBLE("relation.learning_rate", relation.learning_rate);
#undef DOMEX_INT
#undef DOMEX_DOUBLE
    return m;
  }();
  return *setters;
}

}  // namespace

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string item = Trim(text.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

ConfigMap ParseConfig(std::string_view text) {
  ConfigMap out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kBadFormat,
                  "config line " + std::to_string(line_no) + " lacks '=': " + trimmed);
    }
    const std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorKind::kBadFormat, "config line " + std::to_string(line_no) + " lacks a key");
    }
    out[key] = Trim(std::string_view(trimmed).substr(eq + 1));
  }
  return out;
}

ConfigMap LoadConfigFile(const std::filesystem::path &path) { return ParseConfig(ReadFile(path)); }

void MergeConfig(const ConfigMap &overrides, ConfigMap *base) {
  for (const auto &[k, v] : overrides) (*base)[k] = v;
}

void ApplyConfig(const ConfigMap &config, ExperimentSpec *spec) {
  const auto &setters = Setters();
  for (const auto &[key, value] : config) {
    auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorKind::kUsage, "unknown config key '" + key + "'");
    it->second(spec, key, value);
  }
}

}  // namespace domex
