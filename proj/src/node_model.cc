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

#include "domex/node_model.h"

#include <fstream>
#include <sstream>

#include "domex/checkpoint.h"
#include "domex/errors.h"
#include "domex/nn/adam.h"

namespace domex {

namespace {

constexpr double kWeightScale = 0.08;
constexpr double kEmbeddingScale = 0.25;

nn::Parameter &AddWeight(nn::ParameterSet &params, const std::string &name,
                         std::vector<int> shape, double scale, Rng &rng) {
  nn::Parameter &p = params.Add(name, std::move(shape));
  nn::InitUniform(p, scale, rng);
  return p;
}

}  // namespace

void NodeModelConfig::Validate() const {
  const int sizes[] = {dim_char,      dim_word,  cnn_filters, cnn_kernel, lstm_hidden_node_text,
                       lstm_hidden_prev_text, dim_tag, dim_type, mlp_hidden, epochs, batch_size};
  for (int s : sizes) {
    if (s <= 0) throw Error(ErrorKind::kUsage, "node model sizes must be positive");
  }
  if (lstm_hidden_node_text % 2 || lstm_hidden_prev_text % 2) {
    throw Error(ErrorKind::kUsage, "text LSTM sizes are split over two directions");
  }
  if (dropout < 0.0 || dropout >= 1.0) throw Error(ErrorKind::kUsage, "dropout outside [0, 1)");
}

nlohmann::json NodeModelConfig::ToJson() const {
  return {{"dim_char", dim_char},
          {"dim_word", dim_word},
          {"cnn_filters", cnn_filters},
          {"cnn_kernel", cnn_kernel},
          {"lstm_hidden_node_text", lstm_hidden_node_text},
          {"lstm_hidden_prev_text", lstm_hidden_prev_text},
          {"dim_tag", dim_tag},
          {"dim_type", dim_type},
          {"mlp_hidden", mlp_hidden},
          {"dropout", dropout},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"learning_rate", learning_rate}};
}

NodeModelConfig NodeModelConfig::FromJson(const nlohmann::json &j) {
  NodeModelConfig c;
  c.dim_char = j.at("dim_char");
  c.dim_word = j.at("dim_word");
  c.cnn_filters = j.at("cnn_filters");
  c.cnn_kernel = j.at("cnn_kernel");
  c.lstm_hidden_node_text = j.at("lstm_hidden_node_text");
  c.lstm_hidden_prev_text = j.at("lstm_hidden_prev_text");
  c.dim_tag = j.at("dim_tag");
  c.dim_type = j.at("dim_type");
  c.mlp_hidden = j.at("mlp_hidden");
  c.dropout = j.at("dropout");
  c.epochs = j.at("epochs");
  c.batch_size = j.at("batch_size");
  c.learning_rate = j.at("learning_rate");
  return c;
}

FeaturizedPage FeaturizeForModel(const Page &filtered, const Page *raw, const Vocab &vocab,
                                 const VerticalSchema *schema) {
  FeaturizedPage out;
  out.page_id = filtered.page_id;
  out.site_id = filtered.site_id;
  out.bundles = FeaturizePage(filtered, vocab, raw);
  if (schema != nullptr) out.labels = NodeLabels(filtered, *schema);
  return out;
}

nn::LstmWeights AddLstm(nn::ParameterSet &params, const std::string &prefix, int input,
                        int hidden, Rng &rng) {
  nn::LstmWeights lw;
  lw.w = &AddWeight(params, prefix + ".w", {input, 4 * hidden}, kWeightScale, rng);
  lw.u = &AddWeight(params, prefix + ".u", {hidden, 4 * hidden}, kWeightScale, rng);
  lw.b = &params.Add(prefix + ".b", {4 * hidden});
  for (int j = hidden; j < 2 * hidden; ++j) (*lw.b).value[j] = 1.0;
  return lw;
}

NodeModel::NodeModel(const NodeModelConfig &config, const Vocab &vocab,
                     const VerticalSchema &schema, uint64_t seed)
    : config_(config), vocab_(vocab), schema_(schema) {
  config_.Validate();
  schema_.Validate();
  Rng rng(seed);
  Build(rng);
}

NodeModel::Encoder NodeModel::MakeEncoder(const std::string &prefix, int lstm_total, Rng &rng) {
  Encoder e;
  e.filters = &AddWeight(params_, prefix + ".cnn.filters",
                         {config_.cnn_kernel, config_.dim_char, config_.cnn_filters},
                         kWeightScale, rng);
  e.bias = &params_.Add(prefix + ".cnn.bias", {config_.cnn_filters});
  const int input = config_.dim_word + config_.cnn_filters;
  e.forward = AddLstm(params_, prefix + ".lstm_fwd", input, lstm_total / 2, rng);
  e.backward = AddLstm(params_, prefix + ".lstm_bwd", input, lstm_total / 2, rng);
  return e;
}

void NodeModel::Build(Rng &rng) {
  char_embedding_ = &AddWeight(params_, "char_embedding", {vocab_.num_chars(), config_.dim_char},
                               kEmbeddingScale, rng);
  word_embedding_ = &AddWeight(params_, "word_embedding", {vocab_.num_words(), config_.dim_word},
                               kEmbeddingScale, rng);
  tag_embedding_ = &AddWeight(params_, "tag_embedding", {vocab_.num_tags(), config_.dim_tag},
                              kEmbeddingScale, rng);
  type_embedding_ = &AddWeight(params_, "type_embedding", {vocab_.num_types(), config_.dim_type},
                               kEmbeddingScale, rng);
  encoders_[0] = MakeEncoder("node_text", config_.lstm_hidden_node_text, rng);
  encoders_[1] = MakeEncoder("prev_text", config_.lstm_hidden_prev_text, rng);
  hidden_w_ = &AddWeight(params_, "mlp.hidden.w", {config_.node_vector_dim(), config_.mlp_hidden},
                         kWeightScale, rng);
  hidden_b_ = &params_.Add("mlp.hidden.b", {config_.mlp_hidden});
  out_w_ = &AddWeight(params_, "mlp.out.w", {config_.mlp_hidden, num_classes()}, kWeightScale, rng);
  out_b_ = &params_.Add("mlp.out.b", {num_classes()});
}

nn::Var NodeModel::EncodeTextView(nn::Graph &g, const std::vector<TokenIds> &tokens, View which,
                                  CnnMemo *memo) {
  const int view = static_cast<int>(which);
  const Encoder &enc = encoders_[view];
  if (tokens.empty()) {
    const int total = which == View::kNode ? config_.lstm_hidden_node_text
                                           : config_.lstm_hidden_prev_text;
    return g.Constant(nn::Tensor({total}));
  }
  std::vector<int> word_ids;
  std::vector<nn::Var> char_vectors;
  for (const TokenIds &t : tokens) {
    word_ids.push_back(t.word);
    std::vector<int> chars = t.chars.empty() ? std::vector<int>{Vocab::kPad} : t.chars;
    auto key = std::make_pair(view, chars);
    if (memo != nullptr) {
      auto it = memo->find(key);
      if (it != memo->end()) {
        char_vectors.push_back(it->second);
        continue;
      }
    }
    nn::Var c = nn::Conv1dMaxPool(g, nn::EmbedLookup(g, *char_embedding_, chars), *enc.filters,
                                  *enc.bias);
    if (memo != nullptr) memo->emplace(std::move(key), c);
    char_vectors.push_back(c);
  }
  nn::Var words = nn::EmbedLookup(g, *word_embedding_, word_ids);
  nn::Var steps = nn::ConcatCols(g, words, nn::StackRows(g, char_vectors));
  return nn::BiLstmAvg(g, steps, enc.forward, enc.backward);
}

nn::Var NodeModel::EncodeDiscreteView(nn::Graph &g, const std::vector<int> &tag_ids,
                                      const std::vector<int> &type_ids) {
  nn::Var tags = nn::MaxRows(g, nn::EmbedLookup(g, *tag_embedding_, tag_ids));
  nn::Var types = nn::MaxRows(g, nn::EmbedLookup(g, *type_embedding_, type_ids));
  return nn::Concat(g, {tags, types});
}

nn::Var NodeModel::EncodeNode(nn::Graph &g, const NodeFeatureBundle &bundle, CnnMemo *memo) {
  nn::Var node_text = EncodeTextView(g, bundle.node_tokens, View::kNode, memo);
  nn::Var prev_text = EncodeTextView(g, bundle.prev_tokens, View::kPrev, memo);
  nn::Var discrete = EncodeDiscreteView(g, bundle.tag_features, bundle.type_features);
  return nn::Concat(g, {node_text, prev_text, discrete});
}

nn::Var NodeModel::Classify(nn::Graph &g, nn::Var node_vector, bool train, Rng &rng) {
  nn::Var hidden = nn::Dense(g, node_vector, *hidden_w_, *hidden_b_, nn::Activation::kRelu);
  hidden = nn::Dropout(g, hidden, config_.dropout, train, rng);
  return nn::Dense(g, hidden, *out_w_, *out_b_, nn::Activation::kNone);
}

std::vector<NodePrediction> NodeModel::PredictPage(const FeaturizedPage &page) {
  std::vector<NodePrediction> out;
  out.reserve(page.bundles.size());
  Rng unused(0);
  for (size_t i = 0; i < page.bundles.size(); ++i) {
    nn::Graph g;
    CnnMemo memo;
    nn::Var v = EncodeNode(g, page.bundles[i], &memo);
    nn::Var h = Classify(g, v, false, unused);
    NodePrediction p;
    p.ordinal = static_cast<int>(i);
    p.scores = g.value(h).values();
    p.probs = nn::Softmax(p.scores.data(), static_cast<int>(p.scores.size()));
    p.label = nn::ArgMax(p.scores);
    p.vector = g.value(v).values();
    out.push_back(std::move(p));
  }
  return out;
}

int NodeModel::LoadWordVectors(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  const int d = config_.dim_word;
  int replaced = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (static_cast<int>(values.size()) != d) {
      throw Error(ErrorKind::kBadFormat, path.string() + ":" + std::to_string(line_no) +
                                             ": expected " + std::to_string(d) + " values");
    }
    const int id = vocab_.WordId(token);
    if (id == Vocab::kOov) continue;
    std::copy(values.begin(), values.end(),
              word_embedding_->value.data() + static_cast<size_t>(id) * d);
    ++replaced;
  }
  return replaced;
}

nlohmann::json NodeModel::Metadata() const {
  return {{"kind", "node"},
          {"activation", "relu"},
          {"config", config_.ToJson()},
          {"node_vector_dim", config_.node_vector_dim()},
          {"schema", {{"vertical", schema_.vertical_name}, {"fields", schema_.fields}}},
          {"vocab", vocab_.ToJson()}};
}

std::string NodeModel::SaveCheckpoint() const { return EncodeCheckpoint(Metadata(), params_); }

NodeModel NodeModel::LoadCheckpoint(std::string_view bytes) {
  Checkpoint ckpt = DecodeCheckpoint(bytes);
  const nlohmann::json &meta = ckpt.metadata;
  try {
    if (meta.at("kind") != "node") throw Error(ErrorKind::kBadFormat, "not a node checkpoint");
    VerticalSchema schema;
    schema.vertical_name = meta.at("schema").at("vertical");
    schema.fields = meta.at("schema").at("fields").get<std::vector<std::string>>();
    NodeModelConfig config = NodeModelConfig::FromJson(meta.at("config"));
    if (meta.at("node_vector_dim") != config.node_vector_dim()) {
      throw Error(ErrorKind::kBadFormat, "node vector size disagrees with config");
    }
    NodeModel model(config, Vocab::FromJson(meta.at("vocab")), schema, 0);
    RestoreParameters(ckpt, &model.params());
    return model;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kBadFormat, std::string("node checkpoint metadata: ") + e.what());
  }
}

void FitNodeModel(NodeModel &model, const std::vector<FeaturizedPage> &pages, int epochs,
                  Rng &rng, NodeTrainLog *log) {
  std::vector<std::pair<int, int>> examples;
  std::vector<int> class_counts(model.num_classes(), 0);
  for (size_t p = 0; p < pages.size(); ++p) {
    if (pages[p].labels.size() != pages[p].bundles.size()) {
      throw Error(ErrorKind::kEmptyTrainingSet, "page " + pages[p].page_id + " is unlabeled");
    }
    for (size_t i = 0; i < pages[p].bundles.size(); ++i) {
      examples.emplace_back(static_cast<int>(p), static_cast<int>(i));
      ++class_counts.at(pages[p].labels[i]);
    }
  }
  if (examples.empty()) throw Error(ErrorKind::kEmptyTrainingSet, "no seed nodes to train on");
  if (log != nullptr) {
    log->class_counts = class_counts;
    log->examples = static_cast<int>(examples.size());
  }
  nn::Adam adam(&model.params(), {model.config().learning_rate, 0.9, 0.999, 1e-7});
  model.params().ZeroGrad();
  const size_t batch = static_cast<size_t>(model.config().batch_size);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.Shuffle(examples);
    double total = 0.0;
    for (size_t start = 0; start < examples.size(); start += batch) {
      const size_t end = std::min(examples.size(), start + batch);
      nn::Graph g;
      NodeModel::CnnMemo memo;
      std::vector<nn::Var> losses;
      for (size_t e = start; e < end; ++e) {
        const auto [p, i] = examples[e];
        nn::Var v = model.EncodeNode(g, pages[p].bundles[i], &memo);
        nn::Var h = model.Classify(g, v, true, rng);
        losses.push_back(nn::SoftmaxXent(g, h, pages[p].labels[i]));
      }
      nn::Var loss = nn::MeanOf(g, losses);
      g.Backward(loss);
      adam.Step();
      total += g.value(loss)[0] * static_cast<double>(end - start);
    }
    if (log != nullptr) log->epoch_loss.push_back(total / static_cast<double>(examples.size()));
  }
}

NodeModel TrainNodeModel(const std::vector<FeaturizedPage> &pages, const NodeModelConfig &config,
                         const Vocab &vocab, const VerticalSchema &schema, uint64_t seed,
                         NodeTrainLog *log) {
  NodeModel model(config, vocab, schema, seed);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  FitNodeModel(model, pages, config.epochs, rng, log);
  return model;
}

}  // namespace domex
