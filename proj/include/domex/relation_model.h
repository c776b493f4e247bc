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

// Second stage: relational reasoning over node pairs.
//
// Fields predicted by the first stage on a page are certain and anchor the
// page; the others are uncertain and contribute their top-m candidates.
// Every ordered pair of distinct fields yields node pairs, each encoded as
//
//   [n_head ; n_tail ; xpath(head) ; xpath(tail) ; pos(head) ; pos(tail)]
//
// and classified into (N,N), (N,V), (V,N), (V,V). Value votes pick one
// candidate per uncertain field, and site-level voting then aligns each
// field to the xpath most pages chose.

#ifndef DOMEX_RELATION_MODEL_H_
#define DOMEX_RELATION_MODEL_H_

#include <map>
#include <string>
#include <vector>

#include "domex/corpus.h"
#include "domex/node_model.h"
#include "domex/nn/graph.h"
#include "domex/nn/ops.h"
#include "domex/rng.h"
#include "json.hpp"

namespace domex {

struct RelationConfig {
  int dim_xpath_tag = 30;
  int xpath_lstm_hidden = 100;  // both directions together
  int dim_pos = 30;
  int pos_range = 100;
  int mlp_hidden = 100;
  double dropout = 0.3;
  int epochs = 10;
  int batch_size = 32;
  int vote_threshold = 1;
  int m = 10;
  // Probability of treating a certain seed-page field as uncertain when
  // building training pairs.
  double demote_prob = 0.3;
  double learning_rate = 0.001;

  int pair_vector_dim(int node_dim) const {
    return 2 * node_dim + 2 * xpath_lstm_hidden + 2 * dim_pos;
  }
  void Validate() const;

  nlohmann::json ToJson() const;
  static RelationConfig FromJson(const nlohmann::json &j);
};

struct CertaintyPartition {
  int num_fields = 0;
  int m = 0;
  // field -> anchors by descending h_f, ties to the lower ordinal
  std::map<int, std::vector<int>> certain;
  // field -> top-m candidates by descending h_f, ties to the lower ordinal
  std::map<int, std::vector<int>> uncertain;

  int T() const { return static_cast<int>(certain.size()); }
};

CertaintyPartition PartitionFields(const std::vector<NodePrediction> &preds, int num_fields,
                                   int m);

// Moves |field| from certain to uncertain with its top-m candidates.
void DemoteField(CertaintyPartition *part, int field, const std::vector<NodePrediction> &preds);

enum PairLabel { kNN = 0, kNV = 1, kVN = 2, kVV = 3 };
inline constexpr const char *kPairLabelNames[] = {"NN", "NV", "VN", "VV"};

struct NodePair {
  int head = 0;
  int head_field = 0;
  int tail = 0;
  int tail_field = 0;

  bool operator==(const NodePair &) const = default;
};

// Ordered pairs over distinct fields. A certain field contributes its top
// anchor, an uncertain one each candidate; pairs of one node are skipped.
std::vector<NodePair> ConstructPairs(const CertaintyPartition &part);

// T(T-1) + 2T(K-T)m + (K-T)(K-T-1)m^2.
long long PairCountFormula(int K, int T, int m);

// Training label of a pair from per-field truth node sets.
int LabelPair(const NodePair &pair, const std::vector<std::vector<int>> &field_nodes);

// floor(ordinal * L / max(page_size, 1)) clamped to [0, L-1].
int PositionBucket(int ordinal, int page_size, int L);

// Tag names of an xpath with sibling indices removed. Throws
// Error(kMalformedXPath) for an empty or ill-formed path.
std::vector<std::string> XPathTags(const std::string &xpath);

// Stage-1 view of a page as needed by pair encoding.
struct PageContext {
  const Page *page = nullptr;
  const std::vector<NodePrediction> *preds = nullptr;
};

struct RelationTrainLog {
  std::vector<double> epoch_loss;
  std::vector<long long> label_counts = std::vector<long long>(4, 0);  // first epoch
  long long pairs = 0;
};

class RelationModel {
 public:
  using XPathMemo = std::map<std::string, nn::Var>;

  RelationModel(const RelationConfig &config, int node_dim, std::vector<std::string> xpath_tags,
                uint64_t seed);
  RelationModel(const RelationModel &) = delete;
  RelationModel &operator=(const RelationModel &) = delete;
  RelationModel(RelationModel &&) = default;
  RelationModel &operator=(RelationModel &&) = default;

  const RelationConfig &config() const { return config_; }
  int node_dim() const { return node_dim_; }
  const std::vector<std::string> &xpath_tags() const { return tags_; }
  nn::ParameterSet &params() { return params_; }
  const nn::ParameterSet &params() const { return params_; }

  int TagId(const std::string &tag) const;  // 0 for unknown tags

  nn::Var EncodeXPath(nn::Graph &g, const std::string &xpath, XPathMemo *memo);
  nn::Var PositionFeature(nn::Graph &g, int ordinal, int page_size);
  nn::Var EncodePair(nn::Graph &g, const NodePair &pair, const PageContext &ctx,
                     XPathMemo *memo);
  nn::Var Classify(nn::Graph &g, nn::Var pair_vector, bool train, Rng &rng);

  // Argmax pair labels.
  std::vector<int> PredictPairs(const std::vector<NodePair> &pairs, const PageContext &ctx);

  nlohmann::json Metadata() const;
  std::string SaveCheckpoint() const;
  static RelationModel LoadCheckpoint(std::string_view bytes);

 private:
  RelationConfig config_;
  int node_dim_;
  std::vector<std::string> tags_;  // 0 is the unknown-tag bucket
  std::map<std::string, int> tag_ids_;
  nn::ParameterSet params_;
  nn::Parameter *tag_embedding_ = nullptr;
  nn::LstmWeights forward_;
  nn::LstmWeights backward_;
  nn::Parameter *pos_embedding_ = nullptr;
  nn::Parameter *hidden_w_ = nullptr;
  nn::Parameter *hidden_b_ = nullptr;
  nn::Parameter *out_w_ = nullptr;
  nn::Parameter *out_b_ = nullptr;
};

// Sorted distinct xpath tags over the nodes of |pages|, after the unknown
// bucket at index 0.
std::vector<std::string> CollectXPathTags(const std::vector<const Page *> &pages);

// |pages| are filtered seed pages with truth; |preds| are the final stage-1
// predictions on them. Throws Error(kNoPairsConstructed) when no page yields
// a pair.
RelationModel TrainRelationModel(const std::vector<const Page *> &pages,
                                 const std::vector<std::vector<NodePrediction>> &preds,
                                 const VerticalSchema &schema, const RelationConfig &config,
                                 uint64_t seed, RelationTrainLog *log = nullptr);

struct PairVote {
  int node = 0;
  int field = 0;
  int total = 0;        // X
  int value_votes = 0;
};

std::vector<PairVote> TallyVotes(const std::vector<NodePair> &pairs,
                                 const std::vector<int> &labels);

// Chosen ordinal per field (-1 for absent). Certain fields keep their top
// anchor; an uncertain field takes the candidate with value_votes >= N and
// the most value votes, then the higher h_f, then the lower ordinal.
std::vector<int> AggregateVotes(const std::vector<NodePair> &pairs,
                                const std::vector<int> &labels, const CertaintyPartition &part,
                                const std::vector<NodePrediction> &preds, int N);

// Stage-1 extraction: the top anchor of each certain field.
std::vector<int> StageOneChoices(const CertaintyPartition &part);

// Stage-2 extraction for one page.
std::vector<int> ExtractPage(RelationModel &model, const PageContext &ctx, int num_fields);

// Site-level xpath voting. |choices[p][f]| is an ordinal of |pages[p]| or -1.
// The first ceil(fraction * P) pages elect, per field, the most frequent
// chosen xpath (ties to the smaller xpath); every page holding that xpath
// then takes its node.
std::vector<std::vector<int>> SiteVote(const std::vector<const Page *> &pages,
                                       const std::vector<std::vector<int>> &choices,
                                       int num_fields, double fraction);

}  // namespace domex

#endif  // DOMEX_RELATION_MODEL_H_
