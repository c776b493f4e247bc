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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include "domex/errors.h"
#include "domex/node_model.h"
#include "domex/pipeline.h"
#include "gtest/gtest.h"
#include "testing.h"

namespace domex {
namespace {

using testing::MakePage;
using testing::TinyNodeConfig;

const VerticalSchema kSchema = {"auto", {"model", "mpg"}};

SiteCorpus TextSite() {
  SiteCorpus site;
  site.site_id = "s";
  site.vertical = kSchema;
  site.pages.push_back(MakePage("s", "0", {{"/html[1]/h1[1]", "Civic"},
                                           {"/html[1]/b[1]", "MPG :"},
                                           {"/html[1]/span[1]", "city 33 hwy 27"}}));
  site.pages.push_back(MakePage("s", "1", {{"/html[1]/h1[1]", "Accord"},
                                           {"/html[1]/b[1]", "MPG :"},
                                           {"/html[1]/span[1]", "city 34 hwy 28"}}));
  site.pages[0].truth = {{"model", {"Civic"}}, {"mpg", {"city 33 hwy 27"}}};
  site.pages[1].truth = {{"model", {"Accord"}}, {"mpg", {"city 34 hwy 28"}}};
  return site;
}

struct Fixture {
  SiteCorpus site = TextSite();
  Vocab vocab = Vocab::Build({site}, 1);
  std::vector<FeaturizedPage> pages;
  Fixture() {
    for (const Page &p : site.pages) pages.push_back(FeaturizeForModel(p, &p, vocab, &kSchema));
  }
};

std::vector<double> Values(nn::Graph &g, nn::Var v) { return g.value(v).values(); }

TEST(NodeModelConfigTest, DefaultNodeVectorIs250) {
  const NodeModelConfig config;
  EXPECT_EQ(config.node_vector_dim(), 250);
  Fixture f;
  NodeModel model(config, f.vocab, kSchema, 1);
  EXPECT_EQ(model.Metadata().at("node_vector_dim"), 250);
  EXPECT_EQ(model.num_classes(), 3);
}

TEST(NodeModelConfigTest, Validate) {
  NodeModelConfig c = TinyNodeConfig();
  c.lstm_hidden_node_text = 5;
  EXPECT_THROW(c.Validate(), Error);
  c = TinyNodeConfig();
  c.cnn_filters = 0;
  EXPECT_THROW(c.Validate(), Error);
  EXPECT_TRUE(NodeModelConfig::FromJson(TinyNodeConfig().ToJson()).ToJson() ==
              TinyNodeConfig().ToJson());
}

TEST(FeaturizeForModelTest, LabelsFromTruth) {
  Fixture f;
  EXPECT_EQ(f.pages[0].labels, (std::vector<int>{0, 2, 1}));
  const FeaturizedPage unlabeled = FeaturizeForModel(f.site.pages[0], nullptr, f.vocab, nullptr);
  EXPECT_TRUE(unlabeled.labels.empty());
  EXPECT_EQ(unlabeled.bundles.size(), 3u);
}

TEST(NodeModelTest, EmptyViewsAreZero) {
  Fixture f;
  NodeModel model(TinyNodeConfig(), f.vocab, kSchema, 2);
  nn::Graph g;
  EXPECT_EQ(Values(g, model.EncodeTextView(g, {}, NodeModel::View::kNode, nullptr)),
            std::vector<double>(6, 0.0));
  EXPECT_EQ(Values(g, model.EncodeTextView(g, {}, NodeModel::View::kPrev, nullptr)),
            std::vector<double>(4, 0.0));
  EXPECT_EQ(Values(g, model.EncodeDiscreteView(g, {}, {})), std::vector<double>(5, 0.0));
}

TEST(NodeModelTest, NodeVectorIsConcatenationOfViews) {
  Fixture f;
  NodeModel model(TinyNodeConfig(), f.vocab, kSchema, 3);
  const NodeFeatureBundle &b = f.pages[0].bundles[2];
  nn::Graph g;
  std::vector<double> expected = Values(g, model.EncodeTextView(g, b.node_tokens,
                                                                NodeModel::View::kNode, nullptr));
  for (double v : Values(g, model.EncodeTextView(g, b.prev_tokens, NodeModel::View::kPrev,
                                                 nullptr))) {
    expected.push_back(v);
  }
  for (double v : Values(g, model.EncodeDiscreteView(g, b.tag_features, b.type_features))) {
    expected.push_back(v);
  }
  NodeModel::CnnMemo memo;
  EXPECT_EQ(Values(g, model.EncodeNode(g, b, &memo)), expected);
  EXPECT_EQ(static_cast<int>(expected.size()), TinyNodeConfig().node_vector_dim());
}

// Oracle: elementwise max over the looked-up embedding rows.
TEST(NodeModelTest, DiscreteViewIsRowMax) {
  Fixture f;
  NodeModel model(TinyNodeConfig(), f.vocab, kSchema, 4);
  const nn::Tensor &tags = model.params().Get("tag_embedding").value;
  const nn::Tensor &types = model.params().Get("type_embedding").value;
  const std::vector<int> tag_ids = {0, 2, 1}, type_ids = {3, 5};
  std::vector<double> expected;
  for (int c = 0; c < 3; ++c) {
    double m = -1e300;
    for (int id : tag_ids) m = std::max(m, tags[id * 3 + c]);
    expected.push_back(m);
  }
  for (int c = 0; c < 2; ++c) {
    double m = -1e300;
    for (int id : type_ids) m = std::max(m, types[id * 2 + c]);
    expected.push_back(m);
  }
  nn::Graph g;
  EXPECT_EQ(Values(g, model.EncodeDiscreteView(g, tag_ids, type_ids)), expected);
}

TEST(NodeModelTest, NumbersChangeTheEncoding) {
  Fixture f;
  NodeModel model(TinyNodeConfig(), f.vocab, kSchema, 5);
  const auto a = model.PredictPage(f.pages[0])[2].vector;
  const auto b = model.PredictPage(f.pages[1])[2].vector;
  EXPECT_NE(a, b);
  EXPECT_FALSE(std::equal(a.begin(), a.begin() + 6, b.begin()));
  // Same tag and the same string types.
  EXPECT_TRUE(std::equal(a.end() - 5, a.end(), b.end() - 5));
}

TEST(NodeModelTest, ZeroWeightsGiveUniformNone) {
  Fixture f;
  NodeModel model(TinyNodeConfig(), f.vocab, kSchema, 6);
  for (nn::Parameter &p : model.params().params()) p.value.Fill(0.0);
  for (const NodePrediction &p : model.PredictPage(f.pages[0])) {
    EXPECT_EQ(p.label, 0);
    for (double q : p.probs) EXPECT_NEAR(q, 1.0 / 3.0, 1e-12);
  }
}

// Property: probabilities form a distribution whose argmax is the label,
// and predictions do not depend on which other pages were scored.
TEST(NodeModelTest, PredictionInvariants) {
  SynthSpec spec;
  spec.n_sites = 2;
  spec.pages_per_site = 6;
  const std::vector<SiteCorpus> corpus = testing::SynthCorpus(spec);
  std::vector<PreparedSite> prepared;
  for (const SiteCorpus &s : corpus) prepared.push_back(PrepareSite(s, 500));
  const Vocab vocab = Vocab::Build({prepared[0].filtered, prepared[1].filtered});
  const VerticalSchema schema = SynthSchema(spec);
  const auto pages = FeaturizeSites({&prepared[0], &prepared[1]}, vocab, &schema);
  NodeModel model(TinyNodeConfig(), vocab, schema, 7);
  std::vector<std::vector<NodePrediction>> forward;
  for (const FeaturizedPage &p : pages) forward.push_back(model.PredictPage(p));
  for (size_t i = pages.size(); i-- > 0;) {
    const auto again = model.PredictPage(pages[i]);
    ASSERT_EQ(again.size(), forward[i].size());
    for (size_t n = 0; n < again.size(); ++n) {
      const NodePrediction &p = again[n];
      EXPECT_EQ(p.probs, forward[i][n].probs);
      ASSERT_EQ(p.probs.size(), 5u);
      EXPECT_NEAR(std::accumulate(p.probs.begin(), p.probs.end(), 0.0), 1.0, 1e-9);
      EXPECT_EQ(nn::ArgMax(p.probs), nn::ArgMax(p.scores));
      EXPECT_EQ(p.label, nn::ArgMax(p.scores));
    }
  }
  FeaturizedPage empty;
  EXPECT_TRUE(model.PredictPage(empty).empty());
}

TEST(NodeModelTest, EndToEndGradCheck) {
  Fixture f;
  NodeModel model(TinyNodeConfig(), f.vocab, kSchema, 8);
  Rng rng(8);
  testing::Randomize(model.params(), rng, 0.5);
  Rng sample(9);
  const auto result = testing::GradCheck(
      [&](nn::Graph &g, std::vector<nn::Var> *) {
        Rng unused(0);
        NodeModel::CnnMemo memo;
        std::vector<nn::Var> losses;
        for (int i = 0; i < 3; ++i) {
          nn::Var v = model.EncodeNode(g, f.pages[0].bundles[i], &memo);
          losses.push_back(nn::SoftmaxXent(g, model.Classify(g, v, false, unused),
                                           f.pages[0].labels[i]));
        }
        return nn::MeanOf(g, losses);
      },
      testing::AllParams(model.params()), {}, 1e-5, 25, &sample);
  EXPECT_GT(result.checked, 200);
  EXPECT_LT(result.max_rel_error, 1e-3) << result.worst;
}

TEST(NodeModelTest, EmptyTrainingSet) {
  Fixture f;
  try {
    TrainNodeModel({FeaturizedPage{}}, TinyNodeConfig(), f.vocab, kSchema, 1);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyTrainingSet);
  }
}

TEST(NodeModelTest, WordVectors) {
  Fixture f;
  NodeModel model(TinyNodeConfig(), f.vocab, kSchema, 9);
  testing::TempDir dir("vectors");
  const auto path = dir.path() / "vec.txt";
  std::ofstream(path) << "city 1 2 3 4 5\nunseenword 1 1 1 1 1\n\nhwy 0 0 0 0 0.5\n";
  EXPECT_EQ(model.LoadWordVectors(path), 2);
  const int id = f.vocab.WordId("city");
  const nn::Tensor &table = model.params().Get("word_embedding").value;
  for (int c = 0; c < 5; ++c) EXPECT_EQ(table[id * 5 + c], c + 1.0);
  std::ofstream(path) << "city 1 2\n";
  EXPECT_THROW(model.LoadWordVectors(path), Error);
}

class TrainedNodeModelTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SynthSpec spec;
    spec.n_sites = 1;
    spec.pages_per_site = 12;
    schema_ = new VerticalSchema(SynthSchema(spec));
    prepared_ = new PreparedSite(PrepareSite(testing::SynthCorpus(spec)[0], 500));
    vocab_ = new Vocab(Vocab::Build({prepared_->filtered}));
    pages_ = new std::vector<FeaturizedPage>(FeaturizeSites({prepared_}, *vocab_, schema_));
  }
  static void TearDownTestSuite() {
    delete pages_;
    delete vocab_;
    delete prepared_;
    delete schema_;
  }
  static NodeModelConfig Config() {
    NodeModelConfig c;
    c.dim_char = 8;
    c.dim_word = 16;
    c.cnn_filters = 8;
    c.lstm_hidden_node_text = 16;
    c.lstm_hidden_prev_text = 16;
    c.dim_tag = 8;
    c.dim_type = 8;
    c.mlp_hidden = 32;
    c.epochs = 6;
    c.learning_rate = 0.01;
    return c;
  }

  static VerticalSchema *schema_;
  static PreparedSite *prepared_;
  static Vocab *vocab_;
  static std::vector<FeaturizedPage> *pages_;
};

VerticalSchema *TrainedNodeModelTest::schema_ = nullptr;
PreparedSite *TrainedNodeModelTest::prepared_ = nullptr;
Vocab *TrainedNodeModelTest::vocab_ = nullptr;
std::vector<FeaturizedPage> *TrainedNodeModelTest::pages_ = nullptr;

TEST_F(TrainedNodeModelTest, LearnsSeedSite) {
  NodeTrainLog log;
  NodeModel model = TrainNodeModel(*pages_, Config(), *vocab_, *schema_, 11, &log);
  ASSERT_EQ(log.epoch_loss.size(), 6u);
  EXPECT_LT(log.epoch_loss.back(), 0.5 * log.epoch_loss.front());
  EXPECT_EQ(std::accumulate(log.class_counts.begin(), log.class_counts.end(), 0), log.examples);
  int field_nodes = 0, field_hits = 0, non_none = 0;
  for (const FeaturizedPage &page : *pages_) {
    const auto preds = model.PredictPage(page);
    for (size_t i = 0; i < preds.size(); ++i) {
      non_none += preds[i].label != schema_->num_fields();
      if (page.labels[i] == schema_->num_fields()) continue;
      ++field_nodes;
      field_hits += preds[i].label == page.labels[i];
    }
  }
  EXPECT_GT(non_none, 0);
  EXPECT_GE(field_hits, 0.9 * field_nodes) << field_hits << "/" << field_nodes;
}

TEST_F(TrainedNodeModelTest, DeterministicAndCheckpointRoundTrip) {
  NodeModelConfig c = Config();
  c.epochs = 1;
  NodeModel a = TrainNodeModel(*pages_, c, *vocab_, *schema_, 3);
  NodeModel b = TrainNodeModel(*pages_, c, *vocab_, *schema_, 3);
  const std::string bytes = a.SaveCheckpoint();
  EXPECT_EQ(bytes, b.SaveCheckpoint());
  NodeModel restored = NodeModel::LoadCheckpoint(bytes);
  EXPECT_EQ(restored.SaveCheckpoint(), bytes);
  EXPECT_EQ(restored.schema().fields, schema_->fields);
  const auto x = a.PredictPage((*pages_)[0]);
  const auto y = restored.PredictPage((*pages_)[0]);
  ASSERT_EQ(x.size(), y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].label, y[i].label);
    for (size_t k = 0; k < x[i].probs.size(); ++k) EXPECT_NEAR(x[i].probs[k], y[i].probs[k], 1e-5);
  }
  NodeModel other = TrainNodeModel(*pages_, c, *vocab_, *schema_, 4);
  EXPECT_NE(other.SaveCheckpoint(), bytes);
}

}  // namespace
}  // namespace domex
