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

// Run configuration files: one "key = value" per line, '#' starts a
// comment. Recognized keys:
//
//   vertical, fields (comma list), sites (comma list fixing the site order)
//   seed, filter_k, word_vectors
//   k, permutation, stage, voting (on/off), vote_fraction
//   node.<field> and relation.<field> for every NodeModelConfig and
//   RelationConfig member, e.g. node.epochs = 10, relation.m = 10

#ifndef DOMEX_CONFIG_H_
#define DOMEX_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "domex/pipeline.h"

namespace domex {

using ConfigMap = std::map<std::string, std::string>;

// Throws Error(kBadFormat) for a non-comment line without '='.
ConfigMap ParseConfig(std::string_view text);
ConfigMap LoadConfigFile(const std::filesystem::path &path);

// Later entries win.
void MergeConfig(const ConfigMap &overrides, ConfigMap *base);

// Applies every key to |spec|; unknown keys or bad values throw
// Error(kUsage).
void ApplyConfig(const ConfigMap &config, ExperimentSpec *spec);

std::vector<std::string> SplitList(std::string_view text);

}  // namespace domex

#endif  // DOMEX_CONFIG_H_
