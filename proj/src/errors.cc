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

#include "domex/errors.h"

namespace domex {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnreadableInput: return "UnreadableInput";
    case ErrorKind::kMissingTruthFile: return "MissingTruthFile";
    case ErrorKind::kMissingPage: return "MissingPage";
    case ErrorKind::kCorpusEmpty: return "CorpusEmpty";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kMalformedXPath: return "MalformedXPath";
    case ErrorKind::kDuplicatePrediction: return "DuplicatePrediction";
    case ErrorKind::kInsufficientSites: return "InsufficientSites";
    case ErrorKind::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::kNoPairsConstructed: return "NoPairsConstructed";
    case ErrorKind::kBadFormat: return "BadFormat";
    case ErrorKind::kIo: return "Io";
    case ErrorKind::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kNonFiniteValue: return "NonFiniteValue";
    case ErrorKind::kUsage: return "Usage";
  }
  return "Unknown";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return 2;
    case ErrorKind::kIndexOutOfRange:
    case ErrorKind::kShapeMismatch:
    case ErrorKind::kNonFiniteValue:
      return 4;
    default:
      return 3;
  }
}

}  // namespace domex
