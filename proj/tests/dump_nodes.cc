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

// Prints the parsed leaf nodes of each HTML file argument as JSON lines
// {"file", "xpath", "text", "tag"}. Used by the reference-parser test.

#include <iostream>

#include "domex/corpus.h"
#include "json.hpp"

int main(int argc, char **argv) {
  for (int i = 1; i < argc; ++i) {
    const domex::Page page = domex::ParsePage(domex::ReadFile(argv[i]), "p", "s");
    for (const domex::DomNode &n : page.nodes) {
      nlohmann::json j = {{"file", argv[i]}, {"xpath", n.xpath}, {"text", n.text},
                          {"tag", n.leaf_tag}};
      std::cout << j.dump() << "\n";
    }
  }
  return 0;
}
