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

#ifndef DOMEX_ERRORS_H_
#define DOMEX_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace domex {

enum class ErrorKind {
  // Data errors.
  kUnreadableInput,
  kMissingTruthFile,
  kMissingPage,
  kCorpusEmpty,
  kEmptyCorpus,
  kMalformedXPath,
  kDuplicatePrediction,
  kInsufficientSites,
  kEmptyTrainingSet,
  kNoPairsConstructed,
  kBadFormat,
  kIo,
  // Numeric errors.
  kIndexOutOfRange,
  kShapeMismatch,
  kNonFiniteValue,
  // Caller errors.
  kUsage,
};

std::string_view ErrorKindName(ErrorKind kind);

// Process exit code for an error kind: 2 usage, 3 data, 4 numeric.
int ExitCodeFor(ErrorKind kind);

// All library failures are reported as a domex::Error carrying its kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace domex

#endif  // DOMEX_ERRORS_H_
