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

#include "domex/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <future>
#include <mutex>
#include <set>
#include <sstream>

#include "domex/errors.h"
#include "domex/node_filter.h"

namespace domex {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void Log(const Logger &log, const std::string &message) {
  if (log) log(message);
}

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

MetricsReport Score(const std::vector<SiteExtraction> &sites, const VerticalSchema &schema,
                    std::vector<PredictionRow> *rows_out = nullptr) {
  std::vector<PredictionRow> rows;
  std::vector<const Page *> pages;
  for (const SiteExtraction &ex : sites) {
    for (PredictionRow &r : ToRows(ex, schema)) rows.push_back(std::move(r));
    pages.insert(pages.end(), ex.pages.begin(), ex.pages.end());
  }
  MetricsReport report = PageLevelF1(rows, pages, schema);
  if (rows_out != nullptr) *rows_out = std::move(rows);
  return report;
}

const std::vector<std::string> kVariantOrder = {"stage1", "stage1_voted", "stage2",
                                                "stage2_voted"};

}  // namespace

void ExperimentSpec::Validate() const {
  schema.Validate();
  if (k < 1) throw Error(ErrorKind::kUsage, "k must be at least 1");
  if (permutation < 0) throw Error(ErrorKind::kUsage, "permutation must be non-negative");
  if (stage != 1 && stage != 2) throw Error(ErrorKind::kUsage, "stage must be 1 or 2");
  if (vote_fraction < 0.0 || vote_fraction > 1.0) {
    throw Error(ErrorKind::kUsage, "vote fraction outside [0, 1]");
  }
  if (filter_k < 1) throw Error(ErrorKind::kUsage, "filter k must be positive");
  node.Validate();
  relation.Validate();
}

std::vector<std::string> CyclicSeeds(const std::vector<std::string> &order, int k,
                                     int permutation) {
  const int n = static_cast<int>(order.size());
  if (k < 1 || k >= n) {
    throw Error(ErrorKind::kInsufficientSites, std::to_string(n) + " sites cannot give " +
                                                   std::to_string(k) + " seeds and a target");
  }
  std::vector<std::string> seeds;
  for (int i = 0; i < k; ++i) seeds.push_back(order[(permutation + i) % n]);
  return seeds;
}

std::vector<std::string> CyclicTargets(const std::vector<std::string> &order, int k,
                                       int permutation) {
  std::vector<std::string> seeds = CyclicSeeds(order, k, permutation);
  std::vector<std::string> targets;
  for (const std::string &s : order) {
    if (std::find(seeds.begin(), seeds.end(), s) == seeds.end()) targets.push_back(s);
  }
  return targets;
}

PreparedSite PrepareSite(const SiteCorpus &raw, int filter_k) {
  return {raw, FilterSite(raw, filter_k)};
}

std::vector<FeaturizedPage> FeaturizeSites(const std::vector<const PreparedSite *> &sites,
                                           const Vocab &vocab, const VerticalSchema *schema) {
  std::vector<FeaturizedPage> out;
  for (const PreparedSite *site : sites) {
    for (size_t p = 0; p < site->filtered.pages.size(); ++p) {
      out.push_back(
          FeaturizeForModel(site->filtered.pages[p], &site->raw.pages.at(p), vocab, schema));
    }
  }
  return out;
}

SiteExtraction ExtractStageOne(NodeModel &node_model, const PreparedSite &site) {
  const int K = node_model.schema().num_fields();
  SiteExtraction ex;
  for (size_t p = 0; p < site.filtered.pages.size(); ++p) {
    const Page &page = site.filtered.pages[p];
    FeaturizedPage fp = FeaturizeForModel(page, &site.raw.pages.at(p), node_model.vocab(), nullptr);
    ex.pages.push_back(&page);
    ex.preds.push_back(node_model.PredictPage(fp));
    // m is irrelevant for certain fields, which are all stage 1 extracts.
    ex.choices.push_back(StageOneChoices(PartitionFields(ex.preds.back(), K, 1)));
    ex.stages.emplace_back(K, "1");
  }
  return ex;
}

SiteExtraction ExtractStageTwo(RelationModel &relation, const SiteExtraction &stage_one,
                               int num_fields) {
  SiteExtraction ex = stage_one;
  for (size_t p = 0; p < ex.pages.size(); ++p) {
    PageContext ctx{ex.pages[p], &ex.preds[p]};
    CertaintyPartition part = PartitionFields(ex.preds[p], num_fields, relation.config().m);
    ex.choices[p] = ExtractPage(relation, ctx, num_fields);
    for (int f = 0; f < num_fields; ++f) ex.stages[p][f] = part.certain.count(f) ? "1" : "2";
  }
  return ex;
}

SiteExtraction ApplySiteVote(const SiteExtraction &in, int num_fields, double fraction) {
  SiteExtraction ex = in;
  ex.choices = SiteVote(ex.pages, in.choices, num_fields, fraction);
  for (size_t p = 0; p < ex.pages.size(); ++p) {
    for (int f = 0; f < num_fields; ++f) {
      if (ex.choices[p][f] != in.choices[p][f]) ex.stages[p][f] = "voted";
    }
  }
  return ex;
}

std::vector<PredictionRow> ToRows(const SiteExtraction &ex, const VerticalSchema &schema) {
  std::vector<PredictionRow> rows;
  for (size_t p = 0; p < ex.pages.size(); ++p) {
    const Page &page = *ex.pages[p];
    for (int f = 0; f < schema.num_fields(); ++f) {
      const int ord = ex.choices[p][f];
      if (ord < 0) continue;
      const DomNode &node = page.nodes.at(ord);
      rows.push_back({page.site_id, page.page_id, schema.fields[f], node.xpath, node.text,
                      ex.stages[p][f]});
    }
  }
  return rows;
}

ExperimentReport RunExperiment(const ExperimentSpec &spec, const std::vector<SiteCorpus> &corpus,
                               const Logger &log) {
  spec.Validate();
  const VerticalSchema &schema = spec.schema;
  const int K = schema.num_fields();
  std::map<std::string, const SiteCorpus *> by_id;
  for (const SiteCorpus &s : corpus) by_id[s.site_id] = &s;
  std::vector<std::string> order = spec.site_order;
  if (order.empty()) {
    for (const SiteCorpus &s : corpus) order.push_back(s.site_id);
  }
  for (const std::string &id : order) {
    if (!by_id.count(id)) {
      throw Error(ErrorKind::kInsufficientSites, "site " + id + " is not in the corpus");
    }
  }
  const std::vector<std::string> seeds = CyclicSeeds(order, spec.k, spec.permutation);
  const std::vector<std::string> targets = CyclicTargets(order, spec.k, spec.permutation);

  Stopwatch total;
  Stopwatch clock;
  std::vector<PreparedSite> seed_sites, target_sites;
  for (const std::string &id : seeds) seed_sites.push_back(PrepareSite(*by_id[id], spec.filter_k));
  for (const std::string &id : targets) {
    target_sites.push_back(PrepareSite(*by_id[id], spec.filter_k));
  }
  std::vector<const PreparedSite *> seed_ptrs;
  std::vector<SiteCorpus> filtered_seeds;
  for (const PreparedSite &s : seed_sites) {
    seed_ptrs.push_back(&s);
    filtered_seeds.push_back(s.filtered);
  }
  Log(log, "filter: " + Fixed(clock.Seconds(), 2) + "s");

  clock = Stopwatch();
  Vocab vocab = Vocab::Build(filtered_seeds);
  std::vector<FeaturizedPage> train = FeaturizeSites(seed_ptrs, vocab, &schema);
  NodeModel node_model(spec.node, vocab, schema, spec.seed);
  if (!spec.word_vectors.empty()) node_model.LoadWordVectors(spec.word_vectors);
  NodeTrainLog node_log;
  Rng node_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  FitNodeModel(node_model, train, spec.node.epochs, node_rng, &node_log);
  Log(log, "stage 1 training: " + std::to_string(node_log.examples) + " nodes, " +
               Fixed(clock.Seconds(), 2) + "s");

  // Split hygiene: nothing from a target site reached training.
  std::set<std::string> trained_on;
  for (const FeaturizedPage &p : train) trained_on.insert(p.site_id);
  for (const std::string &t : targets) {
    if (trained_on.count(t)) {
      throw Error(ErrorKind::kUsage, "split hygiene violated: target site " + t + " was trained on");
    }
  }

  clock = Stopwatch();
  std::vector<SiteExtraction> stage1;
  for (const PreparedSite &s : target_sites) stage1.push_back(ExtractStageOne(node_model, s));
  Log(log, "stage 1 inference: " + Fixed(clock.Seconds(), 2) + "s");

  std::map<std::string, std::vector<SiteExtraction>> variants;
  variants["stage1"] = stage1;
  std::vector<SiteExtraction> voted1;
  for (const SiteExtraction &ex : stage1) voted1.push_back(ApplySiteVote(ex, K, spec.vote_fraction));
  variants["stage1_voted"] = voted1;

  nlohmann::json relation_json;
  std::vector<SiteExtraction> stage2;
  if (spec.stage == 2) {
    clock = Stopwatch();
    std::vector<const Page *> seed_pages;
    std::vector<std::vector<NodePrediction>> seed_preds;
    for (const PreparedSite &s : seed_sites) {
      SiteExtraction ex = ExtractStageOne(node_model, s);
      seed_pages.insert(seed_pages.end(), ex.pages.begin(), ex.pages.end());
      for (auto &p : ex.preds) seed_preds.push_back(std::move(p));
    }
    RelationTrainLog rel_log;
    RelationModel relation = TrainRelationModel(seed_pages, seed_preds, schema, spec.relation,
                                                spec.seed + 1, &rel_log);
    Log(log, "stage 2 training: " + std::to_string(rel_log.pairs) + " pairs, " +
                 Fixed(clock.Seconds(), 2) + "s");
    relation_json = {{"pairs_first_epoch", rel_log.pairs},
                     {"label_counts", {{"NN", rel_log.label_counts[kNN]},
                                       {"NV", rel_log.label_counts[kNV]},
                                       {"VN", rel_log.label_counts[kVN]},
                                       {"VV", rel_log.label_counts[kVV]}}},
                     {"epoch_loss", rel_log.epoch_loss}};
    clock = Stopwatch();
    for (const SiteExtraction &ex : stage1) stage2.push_back(ExtractStageTwo(relation, ex, K));
    Log(log, "stage 2 inference: " + Fixed(clock.Seconds(), 2) + "s");
    variants["stage2"] = stage2;
    std::vector<SiteExtraction> voted2;
    for (const SiteExtraction &ex : stage2) {
      voted2.push_back(ApplySiteVote(ex, K, spec.vote_fraction));
    }
    variants["stage2_voted"] = voted2;
  }

  ExperimentReport report;
  report.primary = std::string(spec.stage == 2 ? "stage2" : "stage1") + (spec.voting ? "_voted" : "");
  nlohmann::json results;
  for (const std::string &name : kVariantOrder) {
    auto it = variants.find(name);
    if (it == variants.end()) continue;
    std::vector<PredictionRow> rows;
    MetricsReport m = Score(it->second, schema, &rows);
    if (name == report.primary) report.predictions = std::move(rows);
    results[name] = m.ToJson();
    report.variants[name] = std::move(m);
  }

  nlohmann::json curve = nlohmann::json::array();
  const std::vector<SiteExtraction> &base = spec.stage == 2 ? stage2 : stage1;
  for (double fraction : spec.curve_fractions) {
    std::vector<SiteExtraction> voted;
    for (const SiteExtraction &ex : base) voted.push_back(ApplySiteVote(ex, K, fraction));
    curve.push_back({{"fraction", fraction}, {"macro_f1", Score(voted, schema).macro_f1}});
  }

  nlohmann::json &j = report.json;
  j["vertical"] = schema.vertical_name;
  j["fields"] = schema.fields;
  j["k"] = spec.k;
  j["permutation"] = spec.permutation;
  j["seed"] = spec.seed;
  j["stage"] = spec.stage;
  j["voting"] = spec.voting;
  j["vote_fraction"] = spec.vote_fraction;
  j["seed_sites"] = seeds;
  j["target_sites"] = targets;
  j["node_config"] = spec.node.ToJson();
  j["node_training"] = {{"examples", node_log.examples},
                        {"class_counts", node_log.class_counts},
                        {"epoch_loss", node_log.epoch_loss}};
  if (spec.stage == 2) {
    j["relation_config"] = spec.relation.ToJson();
    j["relation_training"] = relation_json;
  }
  j["results"] = results;
  j["primary"] = report.primary;
  j["macro_f1"] = report.variants.at(report.primary).macro_f1;
  if (!spec.curve_fractions.empty()) j["voting_curve"] = curve;
  Log(log, "experiment total: " + Fixed(total.Seconds(), 2) + "s");
  return report;
}

std::string FormatExperimentTable(const ExperimentReport &report) {
  std::ostringstream out;
  std::vector<std::string> names;
  for (const std::string &n : kVariantOrder) {
    if (report.variants.count(n)) names.push_back(n);
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-16s", "field");
  out << buf;
  for (const std::string &n : names) {
    std::snprintf(buf, sizeof(buf), " %14s", n.c_str());
    out << buf;
  }
  out << "\n";
  const MetricsReport &first = report.variants.at(names.front());
  for (size_t f = 0; f < first.fields.size(); ++f) {
    std::snprintf(buf, sizeof(buf), "%-16s", first.fields[f].field.c_str());
    out << buf;
    for (const std::string &n : names) {
      std::snprintf(buf, sizeof(buf), " %14.4f", report.variants.at(n).fields[f].f1);
      out << buf;
    }
    out << "\n";
  }
  std::snprintf(buf, sizeof(buf), "%-16s", "macro");
  out << buf;
  for (const std::string &n : names) {
    std::snprintf(buf, sizeof(buf), " %14.4f", report.variants.at(n).macro_f1);
    out << buf;
  }
  out << "\n";
  return out.str();
}

SweepReport RunSweep(const SweepSpec &spec, const std::vector<SiteCorpus> &corpus,
                     const Logger &log) {
  if (spec.ks.empty() || spec.permutations.empty()) {
    throw Error(ErrorKind::kUsage, "sweep needs k values and permutations");
  }
  if (spec.jobs < 1) throw Error(ErrorKind::kUsage, "sweep jobs must be positive");
  std::vector<std::pair<int, int>> grid;
  for (int k : spec.ks) {
    for (int perm : spec.permutations) grid.emplace_back(k, perm);
  }
  // Each cell owns its rng and models, so cells run independently.
  std::vector<std::map<std::string, double>> results(grid.size());
  std::mutex log_mu;
  Logger cell_log = [&](const std::string &m) {
    std::lock_guard<std::mutex> lock(log_mu);
    Log(log, m);
  };
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < grid.size(); i = next++) {
      ExperimentSpec e = spec.base;
      e.k = grid[i].first;
      e.permutation = grid[i].second;
      cell_log("sweep: k=" + std::to_string(e.k) + " permutation=" + std::to_string(e.permutation));
      ExperimentReport r = RunExperiment(e, corpus, cell_log);
      for (const auto &[name, m] : r.variants) results[i][name] = m.macro_f1;
    }
  };
  const int threads = std::min<int>(spec.jobs, static_cast<int>(grid.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::future<void>> futures;
    for (int t = 0; t < threads; ++t) futures.push_back(std::async(std::launch::async, worker));
    for (auto &f : futures) f.get();
  }

  // (k, variant) -> macro F1 per permutation
  std::map<std::pair<int, std::string>, std::vector<double>> cells;
  nlohmann::json runs = nlohmann::json::array();
  for (size_t i = 0; i < grid.size(); ++i) {
    nlohmann::json run = {{"k", grid[i].first}, {"permutation", grid[i].second}};
    for (const auto &[name, f1] : results[i]) {
      cells[{grid[i].first, name}].push_back(f1);
      run[name] = f1;
    }
    runs.push_back(run);
  }
  std::vector<std::string> names;
  for (const std::string &n : kVariantOrder) {
    for (const auto &[key, values] : cells) {
      if (key.second == n) {
        names.push_back(n);
        break;
      }
    }
  }
  SweepReport out;
  nlohmann::json cell_json = nlohmann::json::array();
  std::ostringstream table, csv;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-4s", "k");
  table << buf;
  csv << "k";
  for (const std::string &n : names) {
    std::snprintf(buf, sizeof(buf), " %14s", n.c_str());
    table << buf;
    csv << "," << n;
  }
  table << "\n";
  csv << "\n";
  for (int k : spec.ks) {
    std::snprintf(buf, sizeof(buf), "%-4d", k);
    table << buf;
    csv << k;
    for (const std::string &n : names) {
      const std::vector<double> &v = cells[{k, n}];
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      cell_json.push_back({{"k", k}, {"variant", n}, {"mean_macro_f1", mean}, {"runs", v}});
      std::snprintf(buf, sizeof(buf), " %14.4f", mean);
      table << buf;
      csv << "," << Fixed(mean, 6);
    }
    table << "\n";
    csv << "\n";
  }
  out.json = {{"vertical", spec.base.schema.vertical_name},
              {"ks", spec.ks},
              {"permutations", spec.permutations},
              {"cells", cell_json},
              {"runs", runs}};
  out.table = table.str();
  out.csv = csv.str();
  return out;
}

}  // namespace domex
