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

// Shared helpers for the unit tests and the acceptance runner: temporary
// directories, finite-difference gradient checks and random generators.

#ifndef DOMEX_TESTS_TESTING_H_
#define DOMEX_TESTS_TESTING_H_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "domex/corpus.h"
#include "domex/node_model.h"
#include "domex/synth.h"
#include "domex/nn/graph.h"
#include "domex/nn/tensor.h"
#include "domex/rng.h"

namespace domex::testing {

// Removed with its contents on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag);
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Builds the loss graph. Inputs that should be checked are registered by
// pushing their graph variables, in the order of GradCheck's |inputs|.
using LossBuilder = std::function<nn::Var(nn::Graph &, std::vector<nn::Var> *)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  int checked = 0;
  std::string worst;  // "<name>[<index>]"
};

// Central differences with step |h|. Every entry of every parameter and
// input is checked unless a tensor exceeds |max_entries|, in which case
// that many entries are sampled with |rng|. Relative error is
// |a - n| / max(|a| + |n|, 1e-6).
GradCheckResult GradCheck(const LossBuilder &build, const std::vector<nn::Parameter *> &params,
                          const std::vector<nn::Tensor *> &inputs, double h = 1e-5,
                          int max_entries = 1 << 30, Rng *rng = nullptr);

// Every parameter of a set, in order.
std::vector<nn::Parameter *> AllParams(nn::ParameterSet &set);

nn::Tensor RandomTensor(std::vector<int> shape, Rng &rng, double scale = 1.0);

void Randomize(nn::ParameterSet &set, Rng &rng, double scale);

// A page from (xpath, text) pairs, with leaf tags taken from the xpath.
Page MakePage(const std::string &site, const std::string &id,
              const std::vector<std::pair<std::string, std::string>> &nodes);

// Generates a synthetic vertical on disk and loads it back.
std::vector<SiteCorpus> SynthCorpus(const SynthSpec &spec);

// Small layer sizes for fast model tests.
NodeModelConfig TinyNodeConfig();

}  // namespace domex::testing

#endif  // DOMEX_TESTS_TESTING_H_
