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

// Transfer experiments: train on k seed sites, extract from the unseen
// target sites, score page-level F1.
//
// With a fixed site order of n sites, permutation p uses the seed sites
// order[p], order[p+1], ..., order[p+k-1] (indices mod n) and targets the
// rest. Target-site truth is read only by the scorer.

#ifndef DOMEX_PIPELINE_H_
#define DOMEX_PIPELINE_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "domex/corpus.h"
#include "domex/features.h"
#include "domex/metrics.h"
#include "domex/node_model.h"
#include "domex/relation_model.h"
#include "json.hpp"

namespace domex {

using Logger = std::function<void(const std::string &)>;

struct ExperimentSpec {
  VerticalSchema schema;
  std::vector<std::string> site_order;  // empty means corpus order
  int k = 3;
  int permutation = 0;
  int stage = 2;
  bool voting = true;
  double vote_fraction = 1.0;
  uint64_t seed = 1;
  int filter_k = 500;
  NodeModelConfig node;
  RelationConfig relation;
  std::string word_vectors;             // optional pretrained word vectors
  std::vector<double> curve_fractions;  // optional voting-fraction curve

  void Validate() const;
};

std::vector<std::string> CyclicSeeds(const std::vector<std::string> &order, int k, int permutation);
std::vector<std::string> CyclicTargets(const std::vector<std::string> &order, int k,
                                       int permutation);

// A site as loaded and after boilerplate filtering.
struct PreparedSite {
  SiteCorpus raw;
  SiteCorpus filtered;
};

PreparedSite PrepareSite(const SiteCorpus &raw, int filter_k);

// Labeled features for every page of the sites.
std::vector<FeaturizedPage> FeaturizeSites(const std::vector<const PreparedSite *> &sites,
                                           const Vocab &vocab, const VerticalSchema *schema);

// Per-page extractions over one site: choices[p][f] is a node ordinal of
// the filtered page or -1, stages[p][f] is "1", "2" or "voted".
struct SiteExtraction {
  std::vector<const Page *> pages;
  std::vector<std::vector<NodePrediction>> preds;
  std::vector<std::vector<int>> choices;
  std::vector<std::vector<std::string>> stages;
};

// Stage-1 predictions and extraction for one site.
SiteExtraction ExtractStageOne(NodeModel &node_model, const PreparedSite &site);

// Stage-2 extraction reusing the stage-1 predictions in |stage_one|.
SiteExtraction ExtractStageTwo(RelationModel &relation, const SiteExtraction &stage_one,
                               int num_fields);

SiteExtraction ApplySiteVote(const SiteExtraction &in, int num_fields, double fraction);

std::vector<PredictionRow> ToRows(const SiteExtraction &ex, const VerticalSchema &schema);

struct ExperimentReport {
  nlohmann::json json;
  std::map<std::string, MetricsReport> variants;  // stage1, stage1_voted, stage2, stage2_voted
  std::string primary;
  std::vector<PredictionRow> predictions;  // of the primary variant
};

// Throws kInsufficientSites when fewer than k+1 sites are available.
ExperimentReport RunExperiment(const ExperimentSpec &spec, const std::vector<SiteCorpus> &corpus,
                               const Logger &log = {});

struct SweepSpec {
  ExperimentSpec base;
  std::vector<int> ks;
  std::vector<int> permutations;
  int jobs = 1;  // cells trained concurrently; results do not depend on it
};

struct SweepReport {
  nlohmann::json json;
  std::string table;
  std::string csv;
};

// Mean macro F1 per (k, variant) cell over the permutations.
SweepReport RunSweep(const SweepSpec &spec, const std::vector<SiteCorpus> &corpus,
                     const Logger &log = {});

// Aligned text table of an experiment's variants.
std::string FormatExperimentTable(const ExperimentReport &report);

}  // namespace domex

#endif  // DOMEX_PIPELINE_H_
