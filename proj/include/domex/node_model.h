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

// First stage: a node encoder and a softmax classifier over K fields plus
// None.
//
// The node vector concatenates three views:
//
//   node text   per-token [word embedding ; char CNN] -> BiLSTM, time-averaged
//   prev text   same encoder shape over the preceding-token window
//   discrete    max-pooled leaf-tag embeddings ; max-pooled type embeddings
//
// and feeds an MLP (one relu hidden layer, dropout in training) producing K+1
// scores. Classes 0..K-1 are the schema fields in order and K is None.

#ifndef DOMEX_NODE_MODEL_H_
#define DOMEX_NODE_MODEL_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "domex/corpus.h"
#include "domex/features.h"
#include "domex/nn/graph.h"
#include "domex/nn/ops.h"
#include "domex/nn/tensor.h"
#include "domex/rng.h"
#include "json.hpp"

namespace domex {

struct NodeModelConfig {
  int dim_char = 100;
  int dim_word = 100;
  int cnn_filters = 50;
  int cnn_kernel = 3;
  int lstm_hidden_node_text = 100;  // both directions together
  int lstm_hidden_prev_text = 100;
  int dim_tag = 20;
  int dim_type = 30;
  int mlp_hidden = 100;
  double dropout = 0.3;
  int epochs = 10;
  int batch_size = 16;
  double learning_rate = 0.001;

  int node_vector_dim() const {
    return lstm_hidden_node_text + lstm_hidden_prev_text + dim_tag + dim_type;
  }
  void Validate() const;  // kUsage unless every size is positive and even LSTM totals

  nlohmann::json ToJson() const;
  static NodeModelConfig FromJson(const nlohmann::json &j);
};

// Featurized page with per-node class labels (empty when unlabeled).
struct FeaturizedPage {
  std::string page_id;
  std::string site_id;
  std::vector<NodeFeatureBundle> bundles;
  std::vector<int> labels;
};

// |filtered| supplies the nodes; |raw| (may be null) the preceding-text
// fallback. Labels come from the page's truth when |schema| is given.
FeaturizedPage FeaturizeForModel(const Page &filtered, const Page *raw, const Vocab &vocab,
                                 const VerticalSchema *schema);

struct NodePrediction {
  int ordinal = 0;
  int label = 0;                // argmax; K means None
  std::vector<double> scores;   // pre-softmax h, K+1
  std::vector<double> probs;    // K+1
  std::vector<double> vector;   // node vector reused by the second stage
};

struct NodeTrainLog {
  std::vector<double> epoch_loss;  // mean per-example loss
  std::vector<int> class_counts;   // K+1
  int examples = 0;
};

class NodeModel {
 public:
  enum class View { kNode = 0, kPrev = 1 };

  // Char-CNN outputs shared within one graph, keyed by view and char ids.
  using CnnMemo = std::map<std::pair<int, std::vector<int>>, nn::Var>;

  NodeModel(const NodeModelConfig &config, const Vocab &vocab, const VerticalSchema &schema,
            uint64_t seed);
  NodeModel(const NodeModel &) = delete;
  NodeModel &operator=(const NodeModel &) = delete;
  NodeModel(NodeModel &&) = default;
  NodeModel &operator=(NodeModel &&) = default;

  const NodeModelConfig &config() const { return config_; }
  const Vocab &vocab() const { return vocab_; }
  const VerticalSchema &schema() const { return schema_; }
  int num_classes() const { return schema_.num_fields() + 1; }
  nn::ParameterSet &params() { return params_; }
  const nn::ParameterSet &params() const { return params_; }

  // [lstm total]; a zero vector for an empty token list.
  nn::Var EncodeTextView(nn::Graph &g, const std::vector<TokenIds> &tokens, View which,
                         CnnMemo *memo);
  // [dim_tag + dim_type]; empty bags pool to zeros.
  nn::Var EncodeDiscreteView(nn::Graph &g, const std::vector<int> &tag_ids,
                             const std::vector<int> &type_ids);
  // [node text ; prev text ; discrete].
  nn::Var EncodeNode(nn::Graph &g, const NodeFeatureBundle &bundle, CnnMemo *memo);
  // MLP scores [K+1].
  nn::Var Classify(nn::Graph &g, nn::Var node_vector, bool train, Rng &rng);

  // Inference for every node of a page; dropout off.
  std::vector<NodePrediction> PredictPage(const FeaturizedPage &page);

  // Overwrites word-embedding rows for vocabulary words found in a text file
  // of "token v1 ... vd" lines. Returns the number of rows replaced.
  int LoadWordVectors(const std::filesystem::path &path);

  nlohmann::json Metadata() const;
  std::string SaveCheckpoint() const;
  static NodeModel LoadCheckpoint(std::string_view bytes);

 private:
  struct Encoder {
    nn::Parameter *filters;
    nn::Parameter *bias;
    nn::LstmWeights forward;
    nn::LstmWeights backward;
  };

  void Build(Rng &rng);
  Encoder MakeEncoder(const std::string &prefix, int lstm_total, Rng &rng);

  NodeModelConfig config_;
  Vocab vocab_;
  VerticalSchema schema_;
  nn::ParameterSet params_;
  nn::Parameter *char_embedding_ = nullptr;
  nn::Parameter *word_embedding_ = nullptr;
  nn::Parameter *tag_embedding_ = nullptr;
  nn::Parameter *type_embedding_ = nullptr;
  Encoder encoders_[2];
  nn::Parameter *hidden_w_ = nullptr;
  nn::Parameter *hidden_b_ = nullptr;
  nn::Parameter *out_w_ = nullptr;
  nn::Parameter *out_b_ = nullptr;
};

// Adds an LSTM direction named <prefix>.{w,u,b}: weights uniform(+-0.08),
// biases zero except the forget block at 1.
nn::LstmWeights AddLstm(nn::ParameterSet &params, const std::string &prefix, int input,
                        int hidden, Rng &rng);

// Trains on every node of every page (labels required). Throws
// Error(kEmptyTrainingSet) when there are no nodes.
NodeModel TrainNodeModel(const std::vector<FeaturizedPage> &pages, const NodeModelConfig &config,
                         const Vocab &vocab, const VerticalSchema &schema, uint64_t seed,
                         NodeTrainLog *log = nullptr);

// Runs |epochs| further epochs on an existing model.
void FitNodeModel(NodeModel &model, const std::vector<FeaturizedPage> &pages, int epochs,
                  Rng &rng, NodeTrainLog *log);

}  // namespace domex

#endif  // DOMEX_NODE_MODEL_H_
