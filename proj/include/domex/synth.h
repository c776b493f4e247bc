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

// Synthetic book vertical for desk-scale checks.
//
// Every site draws its own template: wrapper tags, field labels, value
// layout, date/price/isbn formats and the order of the main-block units. A
// page holds boilerplate (navigation, labels, footer), the field values and
// filler such as a blurb, a contributor name and related titles. With decoys
// on, a review list follows the main block; each review carries a reviewer
// name and a date in the same format, tag and year range as the true date,
// so the two are locally indistinguishable.

#ifndef DOMEX_SYNTH_H_
#define DOMEX_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "domex/corpus.h"

namespace domex {

// Field pool in schema order; the first num_fields are used.
inline constexpr const char *kSynthFields[] = {"title", "price", "date", "isbn", "publisher",
                                               "pages"};
constexpr int kMaxSynthFields = 6;

struct SynthSpec {
  std::string vertical = "synbook";
  int n_sites = 6;
  int pages_per_site = 50;
  int num_fields = 4;
  bool decoys = true;
  int min_decoys = 2;
  int max_decoys = 5;
  uint64_t seed = 1;
};

VerticalSchema SynthSchema(const SynthSpec &spec);

// Files as relative path -> content, in path order. Paths follow the corpus
// layout under one root, plus "<vertical>.conf".
std::vector<std::pair<std::string, std::string>> GenerateSyntheticFiles(const SynthSpec &spec);

// Writes the files under |root|. Returns the schema.
VerticalSchema WriteSyntheticCorpus(const SynthSpec &spec, const std::filesystem::path &root);

}  // namespace domex

#endif  // DOMEX_SYNTH_H_
