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

// Command-line front end. Every subcommand reads the run configuration
// from --config (or <data>/<vertical>.conf when present) and then applies
// flag overrides, so a flag always wins over the file.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "domex/analysis.h"
#include "domex/config.h"
#include "domex/corpus.h"
#include "domex/errors.h"
#include "domex/node_filter.h"
#include "domex/pipeline.h"
#include "domex/synth.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace domex {
namespace {

struct Common {
  std::string data;
  std::string corpus_cache;
  std::string config;
  std::string sites;  // restricts the loaded sites
  bool quiet = false;
  ConfigMap overrides;
  std::vector<std::string> sets;
};

// Binds |flag| to config |key| so a given flag lands in the overrides.
void Bind(CLI::App *app, Common *c, const std::string &flag, const std::string &key,
          const std::string &help) {
  app->add_option_function<std::string>(
      flag, [c, key](const std::string &v) { c->overrides[key] = v; }, help);
}

void AddCommon(CLI::App *app, Common *c) {
  app->add_option("--data", c->data, "corpus root holding <vertical>/ and groundtruth/");
  app->add_option("--corpus", c->corpus_cache, "corpus cache written by 'ingest'");
  app->add_option("--config", c->config, "key = value configuration file");
  app->add_option("--set", c->sets, "extra key=value configuration override")->take_all();
  app->add_flag("-q,--quiet", c->quiet, "no progress on stderr");
  Bind(app, c, "--vertical", "vertical", "vertical name");
  Bind(app, c, "--fields", "fields", "comma-separated field names");
  Bind(app, c, "--site-order", "sites", "comma-separated fixed site order");
  Bind(app, c, "--filter-k", "filter_k", "variable nodes kept per site");
}

Logger MakeLogger(const Common &c) {
  if (c.quiet) return {};
  return [](const std::string &m) { std::cerr << "[domex] " << m << std::endl; };
}

ExperimentSpec BuildSpec(Common &c) {
  for (const std::string &s : c.sets) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::kUsage, "--set expects key=value: " + s);
    ConfigMap one = ParseConfig(s);
    MergeConfig(one, &c.overrides);
  }
  ConfigMap config;
  if (!c.config.empty()) {
    config = LoadConfigFile(c.config);
  } else if (!c.data.empty() && c.overrides.count("vertical")) {
    const fs::path auto_conf = fs::path(c.data) / (c.overrides.at("vertical") + ".conf");
    if (fs::exists(auto_conf)) config = LoadConfigFile(auto_conf);
  }
  MergeConfig(c.overrides, &config);
  ExperimentSpec spec;
  ApplyConfig(config, &spec);
  return spec;
}

std::vector<SiteCorpus> LoadCorpus(const Common &c, ExperimentSpec &spec,
                                   const Logger &log) {
  std::vector<SiteCorpus> sites;
  if (!c.corpus_cache.empty()) {
    sites = DeserializeCorpus(ReadFile(c.corpus_cache));
    if (spec.schema.fields.empty() && !sites.empty()) spec.schema = sites.front().vertical;
  } else {
    if (c.data.empty()) throw Error(ErrorKind::kUsage, "need --data or --corpus");
    spec.schema.Validate();
    LoadReport report;
    sites = LoadVertical(c.data, spec.schema, &report);
    for (const std::string &m : report.missing_truth_files) {
      if (log) log("missing truth file: " + m);
    }
  }
  if (!c.sites.empty()) {
    const std::vector<std::string> wanted = SplitList(c.sites);
    std::vector<SiteCorpus> kept;
    for (const std::string &id : wanted) {
      bool found = false;
      for (const SiteCorpus &s : sites) {
        if (s.site_id == id) {
          kept.push_back(s);
          found = true;
        }
      }
      if (!found) throw Error(ErrorKind::kInsufficientSites, "site " + id + " is not in the corpus");
    }
    sites = std::move(kept);
  }
  return sites;
}

void WriteOutput(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    WriteFile(path, content);
  }
}

std::vector<PreparedSite> Prepare(const std::vector<SiteCorpus> &sites, int filter_k) {
  std::vector<PreparedSite> out;
  for (const SiteCorpus &s : sites) out.push_back(PrepareSite(s, filter_k));
  return out;
}

std::vector<SiteCorpus> Select(const std::vector<SiteCorpus> &sites,
                               const std::vector<std::string> &ids) {
  std::vector<SiteCorpus> out;
  for (const std::string &id : ids) {
    bool found = false;
    for (const SiteCorpus &s : sites) {
      if (s.site_id == id) {
        out.push_back(s);
        found = true;
      }
    }
    if (!found) throw Error(ErrorKind::kInsufficientSites, "site " + id + " is not in the corpus");
  }
  return out;
}

std::string PredictionLines(const std::vector<PredictionRow> &rows) {
  std::string out;
  for (const PredictionRow &r : rows) {
    json j = {{"site_id", r.site_id}, {"page_id", r.page_id}, {"field", r.field},
              {"xpath", r.xpath},     {"text", r.text},       {"stage", r.stage}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string NodeLines(const SiteExtraction &ex) {
  std::string out;
  for (size_t p = 0; p < ex.pages.size(); ++p) {
    for (const NodePrediction &pred : ex.preds[p]) {
      json j = {{"site_id", ex.pages[p]->site_id},
                {"page_id", ex.pages[p]->page_id},
                {"xpath", ex.pages[p]->nodes.at(pred.ordinal).xpath},
                {"label", pred.label},
                {"probs", pred.probs}};
      out += j.dump() + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

int RunIngest(Common &c, const std::string &out) {
  const Logger log = MakeLogger(c);
  ExperimentSpec spec = BuildSpec(c);
  std::vector<SiteCorpus> sites = LoadCorpus(c, spec, log);
  if (!out.empty()) WriteFile(out, SerializeCorpus(sites));
  json summary = {{"vertical", spec.schema.vertical_name}, {"fields", spec.schema.fields}};
  json per_site = json::array();
  for (const SiteCorpus &s : sites) {
    long long nodes = 0;
    std::map<std::string, int> covered;
    for (const Page &p : s.pages) {
      nodes += static_cast<long long>(p.nodes.size());
      const TruthMatch m = MatchTruthNodes(p, spec.schema);
      for (int f = 0; f < spec.schema.num_fields(); ++f) {
        if (!m.field_nodes[f].empty()) ++covered[spec.schema.fields[f]];
      }
    }
    per_site.push_back({{"site", s.site_id},
                        {"pages", s.pages.size()},
                        {"nodes", nodes},
                        {"pages_with_matched_truth", covered}});
  }
  summary["sites"] = per_site;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int RunFilterStats(Common &c, const std::string &dump_stats) {
  const Logger log = MakeLogger(c);
  ExperimentSpec spec = BuildSpec(c);
  std::vector<SiteCorpus> sites = LoadCorpus(c, spec, log);
  json out = json::array();
  std::string dump;
  for (const SiteCorpus &site : sites) {
    const XPathStats stats = CollectXPathStats(site);
    const std::set<std::string> keep = SelectVariableNodes(stats, spec.filter_k);
    long long before = 0, after = 0, truth_total = 0, truth_kept = 0;
    for (const Page &page : site.pages) {
      before += static_cast<long long>(page.nodes.size());
      const TruthMatch m = MatchTruthNodes(page, spec.schema);
      for (const std::vector<int> &nodes : m.field_nodes) {
        for (int ord : nodes) {
          ++truth_total;
          if (keep.count(page.nodes[ord].xpath)) ++truth_kept;
        }
      }
      for (const DomNode &n : page.nodes) after += keep.count(n.xpath);
    }
    out.push_back({{"site", site.site_id},
                   {"distinct_xpaths", stats.counts.size()},
                   {"selected_xpaths", keep.size()},
                   {"nodes_before", before},
                   {"nodes_after", after},
                   {"truth_nodes", truth_total},
                   {"truth_nodes_kept", truth_kept}});
    if (!dump_stats.empty()) dump += XPathStatsToJson(stats) + "\n";
  }
  if (!dump_stats.empty()) WriteFile(dump_stats, dump);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int RunTrainNode(Common &c, const std::string &seeds, const std::string &out_ckpt,
                 const std::string &dump_predictions) {
  const Logger log = MakeLogger(c);
  ExperimentSpec spec = BuildSpec(c);
  spec.Validate();
  std::vector<SiteCorpus> corpus = LoadCorpus(c, spec, log);
  std::vector<PreparedSite> prepared = Prepare(Select(corpus, SplitList(seeds)), spec.filter_k);
  std::vector<const PreparedSite *> ptrs;
  std::vector<SiteCorpus> filtered;
  for (const PreparedSite &p : prepared) {
    ptrs.push_back(&p);
    filtered.push_back(p.filtered);
  }
  Vocab vocab = Vocab::Build(filtered);
  std::vector<FeaturizedPage> train = FeaturizeSites(ptrs, vocab, &spec.schema);
  NodeModel model(spec.node, vocab, spec.schema, spec.seed);
  if (!spec.word_vectors.empty()) {
    const int hits = model.LoadWordVectors(spec.word_vectors);
    if (log) log("pretrained vectors for " + std::to_string(hits) + " words");
  }
  NodeTrainLog train_log;
  Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  FitNodeModel(model, train, spec.node.epochs, rng, &train_log);
  for (size_t e = 0; e < train_log.epoch_loss.size(); ++e) {
    if (log) log("epoch " + std::to_string(e + 1) + " loss " + std::to_string(train_log.epoch_loss[e]));
  }
  WriteFile(out_ckpt, model.SaveCheckpoint());
  if (!dump_predictions.empty()) {
    std::string lines;
    for (const PreparedSite &p : prepared) lines += NodeLines(ExtractStageOne(model, p));
    WriteFile(dump_predictions, lines);
  }
  return 0;
}

int RunTrainPair(Common &c, const std::string &seeds, const std::string &stage1_ckpt,
                 const std::string &out_ckpt) {
  const Logger log = MakeLogger(c);
  ExperimentSpec spec = BuildSpec(c);
  NodeModel node = NodeModel::LoadCheckpoint(ReadFile(stage1_ckpt));
  spec.schema = node.schema();
  spec.Validate();
  std::vector<SiteCorpus> corpus = LoadCorpus(c, spec, log);
  std::vector<PreparedSite> prepared = Prepare(Select(corpus, SplitList(seeds)), spec.filter_k);
  std::vector<const Page *> pages;
  std::vector<std::vector<NodePrediction>> preds;
  std::vector<SiteExtraction> extractions;
  for (const PreparedSite &p : prepared) extractions.push_back(ExtractStageOne(node, p));
  for (SiteExtraction &ex : extractions) {
    pages.insert(pages.end(), ex.pages.begin(), ex.pages.end());
    for (auto &pr : ex.preds) preds.push_back(std::move(pr));
  }
  RelationTrainLog train_log;
  RelationModel relation =
      TrainRelationModel(pages, preds, spec.schema, spec.relation, spec.seed + 1, &train_log);
  if (log) log("pairs in first epoch: " + std::to_string(train_log.pairs));
  for (size_t e = 0; e < train_log.epoch_loss.size(); ++e) {
    if (log) log("epoch " + std::to_string(e + 1) + " loss " + std::to_string(train_log.epoch_loss[e]));
  }
  WriteFile(out_ckpt, relation.SaveCheckpoint());
  return 0;
}

int RunPredict(Common &c, const std::string &stage1_ckpt, const std::string &stage2_ckpt,
               const std::string &voting, double vote_fraction, const std::string &out,
               const std::string &dump_nodes) {
  const Logger log = MakeLogger(c);
  ExperimentSpec spec = BuildSpec(c);
  NodeModel node = NodeModel::LoadCheckpoint(ReadFile(stage1_ckpt));
  spec.schema = node.schema();
  const bool vote = voting == "on";
  std::vector<SiteCorpus> corpus = LoadCorpus(c, spec, log);
  std::optional<RelationModel> relation;
  if (!stage2_ckpt.empty()) relation.emplace(RelationModel::LoadCheckpoint(ReadFile(stage2_ckpt)));
  const int K = spec.schema.num_fields();
  std::vector<PredictionRow> rows;
  std::string node_lines;
  for (const SiteCorpus &site : corpus) {
    PreparedSite prepared = PrepareSite(site, spec.filter_k);
    SiteExtraction ex = ExtractStageOne(node, prepared);
    if (!dump_nodes.empty()) node_lines += NodeLines(ex);
    if (relation) ex = ExtractStageTwo(*relation, ex, K);
    if (vote) ex = ApplySiteVote(ex, K, vote_fraction);
    for (PredictionRow &r : ToRows(ex, spec.schema)) rows.push_back(std::move(r));
  }
  if (!dump_nodes.empty()) WriteFile(dump_nodes, node_lines);
  WriteOutput(out, PredictionLines(rows));
  return 0;
}

std::vector<PredictionRow> ReadPredictions(const std::string &path) {
  std::vector<PredictionRow> rows;
  std::istringstream in(ReadFile(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      rows.push_back({j.at("site_id").get<std::string>(), j.at("page_id").get<std::string>(),
                      j.at("field").get<std::string>(), j.value("xpath", ""),
                      j.at("text").get<std::string>(), j.value("stage", "")});
    } catch (const json::exception &e) {
      throw Error(ErrorKind::kBadFormat,
                  path + ":" + std::to_string(line_no) + ": " + std::string(e.what()));
    }
  }
  return rows;
}

std::string MetricsTable(const MetricsReport &m) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-16s %10s %10s %10s %8s %8s %8s\n", "field", "precision",
                "recall", "f1", "truth", "pred", "correct");
  out << buf;
  for (const FieldMetrics &f : m.fields) {
    std::snprintf(buf, sizeof(buf), "%-16s %10.4f %10.4f %10.4f %8d %8d %8d\n", f.field.c_str(),
                  f.precision, f.recall, f.f1, f.pages_with_truth, f.pages_with_prediction,
                  f.pages_correct);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "%-16s %32.4f\n", "macro", m.macro_f1);
  out << buf;
  return out.str();
}

int RunEvaluate(Common &c, const std::string &predictions, const std::string &out) {
  const Logger log = MakeLogger(c);
  ExperimentSpec spec = BuildSpec(c);
  spec.schema.Validate();
  const std::vector<PredictionRow> rows = ReadPredictions(predictions);
  if (c.sites.empty()) {
    std::set<std::string> predicted;
    for (const PredictionRow &r : rows) predicted.insert(r.site_id);
    for (const std::string &s : predicted) c.sites += (c.sites.empty() ? "" : ",") + s;
  }
  std::vector<SiteCorpus> corpus = LoadCorpus(c, spec, log);
  std::vector<const Page *> pages;
  for (const SiteCorpus &s : corpus) {
    for (const Page &p : s.pages) pages.push_back(&p);
  }
  const MetricsReport m = PageLevelF1(rows, pages, spec.schema);
  if (!out.empty()) WriteFile(out, m.ToJson().dump(2) + "\n");
  std::cout << MetricsTable(m);
  return 0;
}

int RunExperimentCommand(Common &c, const std::string &out, const std::string &predictions_out) {
  const Logger log = MakeLogger(c);
  ExperimentSpec spec = BuildSpec(c);
  std::vector<SiteCorpus> corpus = LoadCorpus(c, spec, log);
  const ExperimentReport report = RunExperiment(spec, corpus, log);
  if (!out.empty()) WriteFile(out, report.json.dump(2) + "\n");
  if (!predictions_out.empty()) WriteFile(predictions_out, PredictionLines(report.predictions));
  std::cout << FormatExperimentTable(report);
  return 0;
}

std::vector<int> IntList(const std::string &text, const std::string &what) {
  std::vector<int> out;
  for (const std::string &item : SplitList(text)) {
    try {
      size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw Error(ErrorKind::kUsage, what + " expects integers, got '" + item + "'");
    }
  }
  return out;
}

int RunSweepCommand(Common &c, const std::string &ks, const std::string &perms, int jobs,
                    const std::string &out_json, const std::string &out_csv) {
  const Logger log = MakeLogger(c);
  SweepSpec sweep;
  sweep.base = BuildSpec(c);
  sweep.ks = IntList(ks, "--ks");
  sweep.permutations = IntList(perms, "--permutations");
  sweep.jobs = jobs;
  std::vector<SiteCorpus> corpus = LoadCorpus(c, sweep.base, log);
  const SweepReport report = RunSweep(sweep, corpus, log);
  if (!out_json.empty()) WriteFile(out_json, report.json.dump(2) + "\n");
  if (!out_csv.empty()) WriteFile(out_csv, report.csv);
  std::cout << report.table;
  return 0;
}

int RunReport(Common &c, const std::string &kind, const std::string &fractions,
              const std::string &out) {
  const Logger log = MakeLogger(c);
  ExperimentSpec spec = BuildSpec(c);
  if (kind == "distance") {
    spec.schema.Validate();
    std::vector<SiteCorpus> corpus = LoadCorpus(c, spec, log);
    std::vector<DistanceMatrix> matrices;
    for (const SiteCorpus &s : corpus) matrices.push_back(ComputeDistanceMatrix(s, spec.schema));
    json j = {{"vertical", spec.schema.vertical_name}, {"fields", spec.schema.fields}};
    j["matrices"] = json::array();
    for (const DistanceMatrix &m : matrices) j["matrices"].push_back(m.ToJson());
    j["correlations"] = json::array();
    for (size_t a = 0; a < matrices.size(); ++a) {
      for (size_t b = a + 1; b < matrices.size(); ++b) {
        j["correlations"].push_back({{"a", matrices[a].site_id},
                                     {"b", matrices[b].site_id},
                                     {"pearson", MatrixCorrelation(matrices[a], matrices[b])}});
      }
    }
    WriteOutput(out, j.dump(2) + "\n");
    return 0;
  }
  if (kind == "voting-curve") {
    for (const std::string &f : SplitList(fractions)) {
      try {
        spec.curve_fractions.push_back(std::stod(f));
      } catch (const std::exception &) {
        throw Error(ErrorKind::kUsage, "--fractions expects numbers, got '" + f + "'");
      }
    }
    std::vector<SiteCorpus> corpus = LoadCorpus(c, spec, log);
    const ExperimentReport report = RunExperiment(spec, corpus, log);
    json j = {{"vertical", spec.schema.vertical_name},
              {"k", spec.k},
              {"permutation", spec.permutation},
              {"stage", spec.stage},
              {"series", report.json.at("voting_curve")}};
    WriteOutput(out, j.dump(2) + "\n");
    return 0;
  }
  throw Error(ErrorKind::kUsage, "unknown report kind '" + kind + "'");
}

int RunSynth(const SynthSpec &spec, const std::string &root) {
  const VerticalSchema schema = WriteSyntheticCorpus(spec, root);
  std::cout << "wrote " << spec.n_sites << " sites x " << spec.pages_per_site << " pages of "
            << schema.vertical_name << " under " << root << "\n";
  return 0;
}

int Main(int argc, char **argv) {
  CLI::App app{"domex: two-stage structured extraction from template web pages"};
  app.require_subcommand(1);

  Common common;
  std::string out, out_ckpt, seeds, stage1_ckpt, stage2_ckpt, dump, predictions, voting = "on";
  std::string ks = "1,2,3,4,5", perms, out_csv, kind, fractions = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  double vote_fraction = 1.0;
  int jobs = 1;

  CLI::App *ingest = app.add_subcommand("ingest", "parse a vertical and cache it");
  AddCommon(ingest, &common);
  ingest->add_option("--out", out, "corpus cache to write");

  CLI::App *filter = app.add_subcommand("filter-stats", "variable-node filter statistics");
  AddCommon(filter, &common);
  filter->add_option("--sites", common.sites, "comma-separated sites (default all)");
  filter->add_option("--dump-stats", dump, "write per-site xpath statistics as JSON lines");

  CLI::App *train_node = app.add_subcommand("train-node", "train the node classifier");
  AddCommon(train_node, &common);
  train_node->add_option("--seeds", seeds, "comma-separated seed sites")->required();
  train_node->add_option("--out-ckpt", out_ckpt, "checkpoint to write")->required();
  train_node->add_option("--dump-predictions", dump, "JSON lines of node predictions on seeds");
  Bind(train_node, &common, "--seed-rng", "seed", "rng seed");
  Bind(train_node, &common, "--epochs", "node.epochs", "training epochs");

  CLI::App *train_pair = app.add_subcommand("train-pair", "train the pair relation model");
  AddCommon(train_pair, &common);
  train_pair->add_option("--seeds", seeds, "comma-separated seed sites")->required();
  train_pair->add_option("--stage1-ckpt", stage1_ckpt, "node model checkpoint")->required();
  train_pair->add_option("--out-ckpt", out_ckpt, "checkpoint to write")->required();
  Bind(train_pair, &common, "--m", "relation.m", "candidates per uncertain field");
  Bind(train_pair, &common, "--vote-threshold", "relation.vote_threshold", "minimum value votes");
  Bind(train_pair, &common, "--seed-rng", "seed", "rng seed");
  Bind(train_pair, &common, "--epochs", "relation.epochs", "training epochs");

  CLI::App *predict = app.add_subcommand("predict", "extract fields from target sites");
  AddCommon(predict, &common);
  predict->add_option("--sites", common.sites, "comma-separated target sites")->required();
  predict->add_option("--stage1-ckpt", stage1_ckpt, "node model checkpoint")->required();
  predict->add_option("--stage2-ckpt", stage2_ckpt, "relation model checkpoint (stage 2)");
  predict->add_option("--voting", voting, "site-level voting")->check(CLI::IsMember({"on", "off"}));
  predict->add_option("--vote-fraction", vote_fraction, "fraction of pages electing")
      ->check(CLI::Range(0.0, 1.0));
  predict->add_option("--out", out, "JSON lines output (default stdout)");
  predict->add_option("--dump-nodes", dump, "JSON lines of stage-1 node predictions");

  CLI::App *evaluate = app.add_subcommand("evaluate", "page-level F1 of predictions");
  AddCommon(evaluate, &common);
  evaluate->add_option("--predictions", predictions, "JSON lines from 'predict'")->required();
  evaluate->add_option("--sites", common.sites, "sites to score (default predicted sites)");
  evaluate->add_option("--out", out, "metrics JSON");

  auto add_protocol = [&](CLI::App *sub) {
    Bind(sub, &common, "--k", "k", "number of seed sites");
    Bind(sub, &common, "--permutation", "permutation", "cyclic permutation index");
    Bind(sub, &common, "--stage", "stage", "1 or 2");
    Bind(sub, &common, "--voting", "voting", "on or off");
    Bind(sub, &common, "--vote-fraction", "vote_fraction", "fraction of pages electing");
    Bind(sub, &common, "--seed-rng", "seed", "rng seed");
    Bind(sub, &common, "--node-epochs", "node.epochs", "stage-1 epochs");
    Bind(sub, &common, "--pair-epochs", "relation.epochs", "stage-2 epochs");
  };

  CLI::App *experiment = app.add_subcommand("experiment", "one transfer experiment");
  AddCommon(experiment, &common);
  add_protocol(experiment);
  experiment->add_option("--out", out, "report JSON");
  experiment->add_option("--predictions-out", predictions, "primary variant predictions");

  CLI::App *sweep = app.add_subcommand("sweep", "mean F1 over k values and permutations");
  AddCommon(sweep, &common);
  add_protocol(sweep);
  sweep->add_option("--ks", ks, "comma-separated k values");
  sweep->add_option("--permutations", perms, "comma-separated permutations")->required();
  sweep->add_option("--jobs", jobs, "cells run concurrently")->check(CLI::PositiveNumber);
  sweep->add_option("--out-json", out, "sweep JSON");
  sweep->add_option("--out-csv", out_csv, "sweep CSV");

  CLI::App *report = app.add_subcommand("report", "analysis series");
  AddCommon(report, &common);
  add_protocol(report);
  report->add_option("--kind", kind, "distance or voting-curve")
      ->required()
      ->check(CLI::IsMember({"distance", "voting-curve"}));
  report->add_option("--sites", common.sites, "sites for distance matrices (default all)");
  report->add_option("--fractions", fractions, "voting fractions for the curve");
  report->add_option("--out", out, "JSON output (default stdout)");

  SynthSpec synth_spec;
  std::string decoys = "on";
  CLI::App *synth = app.add_subcommand("synth", "write a synthetic vertical");
  synth->add_option("--out", out, "corpus root")->required();
  synth->add_option("--vertical", synth_spec.vertical, "vertical name");
  synth->add_option("--sites", synth_spec.n_sites, "number of sites")->check(CLI::Range(2, 99));
  synth->add_option("--pages", synth_spec.pages_per_site, "pages per site")
      ->check(CLI::Range(1, 9999));
  synth->add_option("--fields", synth_spec.num_fields, "number of fields")
      ->check(CLI::Range(1, kMaxSynthFields));
  synth->add_option("--decoys", decoys, "decoy dates")->check(CLI::IsMember({"on", "off"}));
  synth->add_option("--min-decoys", synth_spec.min_decoys, "fewest decoys per page");
  synth->add_option("--max-decoys", synth_spec.max_decoys, "most decoys per page");
  synth->add_option("--seed", synth_spec.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*ingest) return RunIngest(common, out);
  if (*filter) return RunFilterStats(common, dump);
  if (*train_node) return RunTrainNode(common, seeds, out_ckpt, dump);
  if (*train_pair) return RunTrainPair(common, seeds, stage1_ckpt, out_ckpt);
  if (*predict) {
    return RunPredict(common, stage1_ckpt, stage2_ckpt, voting, vote_fraction, out, dump);
  }
  if (*evaluate) return RunEvaluate(common, predictions, out);
  if (*experiment) return RunExperimentCommand(common, out, predictions);
  if (*sweep) return RunSweepCommand(common, ks, perms, jobs, out, out_csv);
  if (*report) return RunReport(common, kind, fractions, out);
  if (*synth) {
    synth_spec.decoys = decoys == "on";
    if (synth_spec.min_decoys < 0 || synth_spec.max_decoys < synth_spec.min_decoys) {
      throw Error(ErrorKind::kUsage, "need 0 <= --min-decoys <= --max-decoys");
    }
    return RunSynth(synth_spec, out);
  }
  return 2;
}

}  // namespace
}  // namespace domex

int main(int argc, char **argv) {
  try {
    return domex::Main(argc, argv);
  } catch (const domex::Error &e) {
    std::cerr << "domex: " << e.what() << std::endl;
    return domex::ExitCodeFor(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "domex: " << e.what() << std::endl;
    return 3;
  }
}
