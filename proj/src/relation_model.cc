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

#include "domex/relation_model.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "domex/checkpoint.h"
#include "domex/errors.h"
#include "domex/nn/adam.h"

namespace domex {

namespace {

constexpr double kWeightScale = 0.08;
constexpr double kEmbeddingScale = 0.25;

// Nodes ranked for |field|: descending score, then ascending ordinal.
std::vector<int> RankNodes(const std::vector<NodePrediction> &preds, int field,
                           const std::vector<int> &subset) {
  std::vector<int> ranked = subset;
  std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
    const double sa = preds[a].scores[field], sb = preds[b].scores[field];
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return ranked;
}

std::vector<int> TopCandidates(const std::vector<NodePrediction> &preds, int field, int m) {
  std::vector<int> all(preds.size());
  for (size_t i = 0; i < preds.size(); ++i) all[i] = static_cast<int>(i);
  std::vector<int> ranked = RankNodes(preds, field, all);
  if (ranked.size() > static_cast<size_t>(m)) ranked.resize(m);
  return ranked;
}

bool IsTagChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '-' || c == '_' || c == ':' || c == '.';
}

}  // namespace

void RelationConfig::Validate() const {
  const int sizes[] = {dim_xpath_tag, xpath_lstm_hidden, dim_pos, pos_range, mlp_hidden,
                       epochs,        batch_size,        m};
  for (int s : sizes) {
    if (s <= 0) throw Error(ErrorKind::kUsage, "relation model sizes must be positive");
  }
  if (xpath_lstm_hidden % 2) {
    throw Error(ErrorKind::kUsage, "xpath LSTM size is split over two directions");
  }
  if (vote_threshold < 1) throw Error(ErrorKind::kUsage, "vote threshold must be >= 1");
  if (dropout < 0.0 || dropout >= 1.0) throw Error(ErrorKind::kUsage, "dropout outside [0, 1)");
  if (demote_prob < 0.0 || demote_prob > 1.0) {
    throw Error(ErrorKind::kUsage, "demote probability outside [0, 1]");
  }
}

nlohmann::json RelationConfig::ToJson() const {
  return {{"dim_xpath_tag", dim_xpath_tag},
          {"xpath_lstm_hidden", xpath_lstm_hidden},
          {"dim_pos", dim_pos},
          {"pos_range", pos_range},
          {"mlp_hidden", mlp_hidden},
          {"dropout", dropout},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"vote_threshold", vote_threshold},
          {"m", m},
          {"demote_prob", demote_prob},
          {"learning_rate", learning_rate}};
}

RelationConfig RelationConfig::FromJson(const nlohmann::json &j) {
  RelationConfig c;
  c.dim_xpath_tag = j.at("dim_xpath_tag");
  c.xpath_lstm_hidden = j.at("xpath_lstm_hidden");
  c.dim_pos = j.at("dim_pos");
  c.pos_range = j.at("pos_range");
  c.mlp_hidden = j.at("mlp_hidden");
  c.dropout = j.at("dropout");
  c.epochs = j.at("epochs");
  c.batch_size = j.at("batch_size");
  c.vote_threshold = j.at("vote_threshold");
  c.m = j.at("m");
  c.demote_prob = j.at("demote_prob");
  c.learning_rate = j.at("learning_rate");
  return c;
}

CertaintyPartition PartitionFields(const std::vector<NodePrediction> &preds, int num_fields,
                                   int m) {
  CertaintyPartition part;
  part.num_fields = num_fields;
  part.m = m;
  std::vector<std::vector<int>> predicted(num_fields);
  for (size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].label < num_fields) predicted[preds[i].label].push_back(static_cast<int>(i));
  }
  for (int f = 0; f < num_fields; ++f) {
    if (!predicted[f].empty()) {
      part.certain[f] = RankNodes(preds, f, predicted[f]);
    } else {
      part.uncertain[f] = TopCandidates(preds, f, m);
    }
  }
  return part;
}

void DemoteField(CertaintyPartition *part, int field, const std::vector<NodePrediction> &preds) {
  if (part->certain.erase(field) == 0) return;
  part->uncertain[field] = TopCandidates(preds, field, part->m);
}

std::vector<NodePair> ConstructPairs(const CertaintyPartition &part) {
  std::vector<std::vector<int>> sides(part.num_fields);
  for (const auto &[f, anchors] : part.certain) {
    if (!anchors.empty()) sides[f] = {anchors.front()};
  }
  for (const auto &[f, candidates] : part.uncertain) sides[f] = candidates;
  std::vector<NodePair> pairs;
  for (int fh = 0; fh < part.num_fields; ++fh) {
    for (int ft = 0; ft < part.num_fields; ++ft) {
      if (fh == ft) continue;
      for (int h : sides[fh]) {
        for (int t : sides[ft]) {
          if (h == t) continue;
          pairs.push_back({h, fh, t, ft});
        }
      }
    }
  }
  return pairs;
}

long long PairCountFormula(int K, int T, int m) {
  const long long k = K, t = T, mm = m;
  return t * (t - 1) + 2 * t * (k - t) * mm + (k - t) * (k - t - 1) * mm * mm;
}

int LabelPair(const NodePair &pair, const std::vector<std::vector<int>> &field_nodes) {
  auto is_value = [&](int node, int field) {
    const auto &nodes = field_nodes.at(field);
    return std::find(nodes.begin(), nodes.end(), node) != nodes.end();
  };
  const bool h = is_value(pair.head, pair.head_field);
  const bool t = is_value(pair.tail, pair.tail_field);
  return (h ? 2 : 0) + (t ? 1 : 0);
}

int PositionBucket(int ordinal, int page_size, int L) {
  const long long b = static_cast<long long>(ordinal) * L / std::max(page_size, 1);
  return static_cast<int>(std::clamp<long long>(b, 0, L - 1));
}

std::vector<std::string> XPathTags(const std::string &xpath) {
  if (xpath.empty() || xpath[0] != '/') {
    throw Error(ErrorKind::kMalformedXPath, "xpath must start with '/': \"" + xpath + "\"");
  }
  std::vector<std::string> tags;
  size_t pos = 1;
  while (pos <= xpath.size()) {
    size_t end = xpath.find('/', pos);
    if (end == std::string::npos) end = xpath.size();
    std::string_view step(xpath.data() + pos, end - pos);
    size_t bracket = step.find('[');
    std::string_view name = step.substr(0, bracket);
    bool ok = !name.empty() && std::all_of(name.begin(), name.end(), IsTagChar);
    if (ok && bracket != std::string_view::npos) {
      std::string_view index = step.substr(bracket + 1);
      ok = index.size() >= 2 && index.back() == ']' &&
           std::all_of(index.begin(), index.end() - 1, [](char c) { return c >= '0' && c <= '9'; });
    }
    if (!ok) throw Error(ErrorKind::kMalformedXPath, "bad step in \"" + xpath + "\"");
    tags.emplace_back(name);
    pos = end + 1;
  }
  return tags;
}

std::vector<std::string> CollectXPathTags(const std::vector<const Page *> &pages) {
  std::set<std::string> tags;
  for (const Page *page : pages) {
    for (const DomNode &node : page->nodes) {
      for (std::string &t : XPathTags(node.xpath)) tags.insert(std::move(t));
    }
  }
  std::vector<std::string> out = {"<unk>"};
  out.insert(out.end(), tags.begin(), tags.end());
  return out;
}

RelationModel::RelationModel(const RelationConfig &config, int node_dim,
                             std::vector<std::string> xpath_tags, uint64_t seed)
    : config_(config), node_dim_(node_dim), tags_(std::move(xpath_tags)) {
  config_.Validate();
  if (tags_.empty()) tags_ = {"<unk>"};
  for (size_t i = 1; i < tags_.size(); ++i) tag_ids_[tags_[i]] = static_cast<int>(i);
  Rng rng(seed);
  tag_embedding_ = &params_.Add("xpath.tag_embedding",
                                {static_cast<int>(tags_.size()), config_.dim_xpath_tag});
  nn::InitUniform(*tag_embedding_, kEmbeddingScale, rng);
  forward_ = AddLstm(params_, "xpath.lstm_fwd", config_.dim_xpath_tag,
                     config_.xpath_lstm_hidden / 2, rng);
  backward_ = AddLstm(params_, "xpath.lstm_bwd", config_.dim_xpath_tag,
                      config_.xpath_lstm_hidden / 2, rng);
  pos_embedding_ = &params_.Add("position_embedding", {config_.pos_range, config_.dim_pos});
  nn::InitUniform(*pos_embedding_, kEmbeddingScale, rng);
  hidden_w_ = &params_.Add("pair_mlp.hidden.w",
                           {config_.pair_vector_dim(node_dim_), config_.mlp_hidden});
  nn::InitUniform(*hidden_w_, kWeightScale, rng);
  hidden_b_ = &params_.Add("pair_mlp.hidden.b", {config_.mlp_hidden});
  out_w_ = &params_.Add("pair_mlp.out.w", {config_.mlp_hidden, 4});
  nn::InitUniform(*out_w_, kWeightScale, rng);
  out_b_ = &params_.Add("pair_mlp.out.b", {4});
}

int RelationModel::TagId(const std::string &tag) const {
  auto it = tag_ids_.find(tag);
  return it == tag_ids_.end() ? 0 : it->second;
}

nn::Var RelationModel::EncodeXPath(nn::Graph &g, const std::string &xpath, XPathMemo *memo) {
  if (memo != nullptr) {
    auto it = memo->find(xpath);
    if (it != memo->end()) return it->second;
  }
  std::vector<int> ids;
  for (const std::string &t : XPathTags(xpath)) ids.push_back(TagId(t));
  nn::Var v = nn::BiLstmAvg(g, nn::EmbedLookup(g, *tag_embedding_, ids), forward_, backward_);
  if (memo != nullptr) memo->emplace(xpath, v);
  return v;
}

nn::Var RelationModel::PositionFeature(nn::Graph &g, int ordinal, int page_size) {
  return nn::EmbedLookup(g, *pos_embedding_,
                         {PositionBucket(ordinal, page_size, config_.pos_range)});
}

nn::Var RelationModel::EncodePair(nn::Graph &g, const NodePair &pair, const PageContext &ctx,
                                  XPathMemo *memo) {
  const std::vector<NodePrediction> &preds = *ctx.preds;
  const int size = static_cast<int>(ctx.page->nodes.size());
  auto node_vector = [&](int i) {
    const std::vector<double> &v = preds.at(i).vector;
    if (static_cast<int>(v.size()) != node_dim_) {
      throw Error(ErrorKind::kShapeMismatch, "node vector size " + std::to_string(v.size()) +
                                                 ", expected " + std::to_string(node_dim_));
    }
    return g.Constant(nn::Tensor::FromVector(v));
  };
  const DomNode &head = ctx.page->nodes.at(pair.head);
  const DomNode &tail = ctx.page->nodes.at(pair.tail);
  return nn::Concat(g, {node_vector(pair.head), node_vector(pair.tail),
                        EncodeXPath(g, head.xpath, memo), EncodeXPath(g, tail.xpath, memo),
                        PositionFeature(g, pair.head, size), PositionFeature(g, pair.tail, size)});
}

nn::Var RelationModel::Classify(nn::Graph &g, nn::Var pair_vector, bool train, Rng &rng) {
  nn::Var hidden = nn::Dense(g, pair_vector, *hidden_w_, *hidden_b_, nn::Activation::kRelu);
  hidden = nn::Dropout(g, hidden, config_.dropout, train, rng);
  return nn::Dense(g, hidden, *out_w_, *out_b_, nn::Activation::kNone);
}

std::vector<int> RelationModel::PredictPairs(const std::vector<NodePair> &pairs,
                                             const PageContext &ctx) {
  std::vector<int> labels;
  labels.reserve(pairs.size());
  Rng unused(0);
  nn::Graph g;
  XPathMemo memo;
  for (const NodePair &pair : pairs) {
    nn::Var h = Classify(g, EncodePair(g, pair, ctx, &memo), false, unused);
    labels.push_back(nn::ArgMax(g.value(h).values()));
  }
  return labels;
}

nlohmann::json RelationModel::Metadata() const {
  return {{"kind", "relation"},
          {"activation", "relu"},
          {"config", config_.ToJson()},
          {"node_vector_dim", node_dim_},
          {"pair_vector_dim", config_.pair_vector_dim(node_dim_)},
          {"xpath_tags", tags_}};
}

std::string RelationModel::SaveCheckpoint() const { return EncodeCheckpoint(Metadata(), params_); }

RelationModel RelationModel::LoadCheckpoint(std::string_view bytes) {
  Checkpoint ckpt = DecodeCheckpoint(bytes);
  const nlohmann::json &meta = ckpt.metadata;
  try {
    if (meta.at("kind") != "relation") {
      throw Error(ErrorKind::kBadFormat, "not a relation checkpoint");
    }
    RelationModel model(RelationConfig::FromJson(meta.at("config")), meta.at("node_vector_dim"),
                        meta.at("xpath_tags").get<std::vector<std::string>>(), 0);
    RestoreParameters(ckpt, &model.params());
    return model;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kBadFormat, std::string("relation checkpoint metadata: ") + e.what());
  }
}

RelationModel TrainRelationModel(const std::vector<const Page *> &pages,
                                 const std::vector<std::vector<NodePrediction>> &preds,
                                 const VerticalSchema &schema, const RelationConfig &config,
                                 uint64_t seed, RelationTrainLog *log) {
  if (pages.size() != preds.size()) {
    throw Error(ErrorKind::kShapeMismatch, "one prediction list per page is required");
  }
  const int K = schema.num_fields();
  int node_dim = 0;
  for (const auto &p : preds) {
    if (!p.empty()) {
      node_dim = static_cast<int>(p.front().vector.size());
      break;
    }
  }
  RelationModel model(config, node_dim, CollectXPathTags(pages), seed);
  std::vector<std::vector<std::vector<int>>> truth;
  for (const Page *page : pages) truth.push_back(MatchTruthNodes(*page, schema).field_nodes);

  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  nn::Adam adam(&model.params(), {config.learning_rate, 0.9, 0.999, 1e-7});
  model.params().ZeroGrad();
  struct Example {
    int page;
    NodePair pair;
    int label;
  };
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<int> page_order(pages.size());
    for (size_t i = 0; i < pages.size(); ++i) page_order[i] = static_cast<int>(i);
    rng.Shuffle(page_order);
    std::vector<Example> examples;
    for (int p : page_order) {
      CertaintyPartition part = PartitionFields(preds[p], K, config.m);
      std::vector<int> certain_fields;
      for (const auto &[f, anchors] : part.certain) certain_fields.push_back(f);
      for (int f : certain_fields) {
        if (rng.Bernoulli(config.demote_prob)) DemoteField(&part, f, preds[p]);
      }
      std::vector<NodePair> pairs = ConstructPairs(part);
      rng.Shuffle(pairs);
      for (const NodePair &pair : pairs) {
        examples.push_back({p, pair, LabelPair(pair, truth[p])});
      }
    }
    if (epoch == 0) {
      if (examples.empty()) {
        throw Error(ErrorKind::kNoPairsConstructed, "seed pages yield no node pairs");
      }
      if (log != nullptr) {
        log->pairs = static_cast<long long>(examples.size());
        for (const Example &e : examples) ++log->label_counts[e.label];
      }
    }
    double total = 0.0;
    const size_t batch = static_cast<size_t>(config.batch_size);
    for (size_t start = 0; start < examples.size(); start += batch) {
      const size_t end = std::min(examples.size(), start + batch);
      nn::Graph g;
      std::map<int, RelationModel::XPathMemo> memos;
      std::vector<nn::Var> losses;
      for (size_t e = start; e < end; ++e) {
        const Example &ex = examples[e];
        PageContext ctx{pages[ex.page], &preds[ex.page]};
        nn::Var r = model.EncodePair(g, ex.pair, ctx, &memos[ex.page]);
        losses.push_back(nn::SoftmaxXent(g, model.Classify(g, r, true, rng), ex.label));
      }
      nn::Var loss = nn::MeanOf(g, losses);
      g.Backward(loss);
      adam.Step();
      total += g.value(loss)[0] * static_cast<double>(end - start);
    }
    if (log != nullptr) log->epoch_loss.push_back(total / static_cast<double>(examples.size()));
  }
  return model;
}

std::vector<PairVote> TallyVotes(const std::vector<NodePair> &pairs,
                                 const std::vector<int> &labels) {
  std::map<std::pair<int, int>, PairVote> votes;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const NodePair &p = pairs[i];
    const int label = labels.at(i);
    PairVote &h = votes[{p.head, p.head_field}];
    h.node = p.head;
    h.field = p.head_field;
    ++h.total;
    if (label == kVN || label == kVV) ++h.value_votes;
    PairVote &t = votes[{p.tail, p.tail_field}];
    t.node = p.tail;
    t.field = p.tail_field;
    ++t.total;
    if (label == kNV || label == kVV) ++t.value_votes;
  }
  std::vector<PairVote> out;
  for (const auto &[key, v] : votes) out.push_back(v);
  return out;
}

std::vector<int> StageOneChoices(const CertaintyPartition &part) {
  std::vector<int> choice(part.num_fields, -1);
  for (const auto &[f, anchors] : part.certain) {
    if (!anchors.empty()) choice[f] = anchors.front();
  }
  return choice;
}

std::vector<int> AggregateVotes(const std::vector<NodePair> &pairs,
                                const std::vector<int> &labels, const CertaintyPartition &part,
                                const std::vector<NodePrediction> &preds, int N) {
  std::vector<int> choice = StageOneChoices(part);
  std::map<std::pair<int, int>, int> value_votes;
  for (const PairVote &v : TallyVotes(pairs, labels)) {
    value_votes[{v.node, v.field}] = v.value_votes;
  }
  for (const auto &[f, candidates] : part.uncertain) {
    int best = -1, best_votes = 0;
    for (int c : candidates) {
      auto it = value_votes.find({c, f});
      const int votes = it == value_votes.end() ? 0 : it->second;
      if (votes < N) continue;
      bool better = best < 0 || votes > best_votes;
      if (!better && votes == best_votes) {
        const double sc = preds[c].scores[f], sb = preds[best].scores[f];
        better = sc > sb || (sc == sb && c < best);
      }
      if (better) {
        best = c;
        best_votes = votes;
      }
    }
    choice[f] = best;
  }
  return choice;
}

std::vector<int> ExtractPage(RelationModel &model, const PageContext &ctx, int num_fields) {
  CertaintyPartition part = PartitionFields(*ctx.preds, num_fields, model.config().m);
  std::vector<NodePair> pairs = ConstructPairs(part);
  std::vector<int> labels = model.PredictPairs(pairs, ctx);
  return AggregateVotes(pairs, labels, part, *ctx.preds, model.config().vote_threshold);
}

std::vector<std::vector<int>> SiteVote(const std::vector<const Page *> &pages,
                                       const std::vector<std::vector<int>> &choices,
                                       int num_fields, double fraction) {
  std::vector<std::vector<int>> out = choices;
  const size_t electors = std::min(
      pages.size(),
      static_cast<size_t>(std::ceil(std::clamp(fraction, 0.0, 1.0) * pages.size() - 1e-9)));
  for (int f = 0; f < num_fields; ++f) {
    std::map<std::string, int> counts;
    for (size_t p = 0; p < electors; ++p) {
      const int ord = choices[p][f];
      if (ord >= 0) ++counts[pages[p]->nodes.at(ord).xpath];
    }
    if (counts.empty()) continue;
    const std::string *winner = nullptr;
    int best = 0;
    for (const auto &[xpath, n] : counts) {
      if (n > best) {
        best = n;
        winner = &xpath;
      }
    }
    for (size_t p = 0; p < pages.size(); ++p) {
      const int ord = pages[p]->FindXPath(*winner);
      if (ord >= 0) out[p][f] = ord;
    }
  }
  return out;
}

}  // namespace domex
