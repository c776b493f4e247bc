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

// Checkpoint container, all integers little-endian:
//
//   "DOMEX-CKPT-1\n"
//   u64 metadata length, metadata JSON
//   u32 tensor count
//   per tensor: u32 name length, name, u32 ndim, u32 dims..., f32 values
//
// Parameters are written in set order. Values are rounded to float32.

#ifndef DOMEX_CHECKPOINT_H_
#define DOMEX_CHECKPOINT_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "domex/nn/tensor.h"
#include "json.hpp"

namespace domex {

inline constexpr std::string_view kCheckpointMagic = "DOMEX-CKPT-1\n";

struct Checkpoint {
  nlohmann::json metadata;
  std::vector<std::pair<std::string, nn::Tensor>> tensors;
};

std::string EncodeCheckpoint(const nlohmann::json &metadata, const nn::ParameterSet &params);

// Throws Error(kBadFormat) on a wrong magic line or truncated data.
Checkpoint DecodeCheckpoint(std::string_view bytes);

// Copies tensors into same-named parameters. Every parameter must be
// present with an identical shape (kBadFormat otherwise).
void RestoreParameters(const Checkpoint &ckpt, nn::ParameterSet *params);

}  // namespace domex

#endif  // DOMEX_CHECKPOINT_H_
