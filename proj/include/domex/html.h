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

// A small, lenient HTML tree builder. It understands void elements, raw
// text elements, comments, character references and the common implied
// end tags (p, li, dt/dd, table rows and cells, option). It does not try to
// reproduce the full HTML5 tree construction algorithm.

#ifndef DOMEX_HTML_H_
#define DOMEX_HTML_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace domex {

struct HtmlNode {
  enum class Kind { kElement, kText };

  Kind kind = Kind::kElement;
  std::string tag;   // lowercase, elements only
  std::string text;  // decoded character data, text nodes only
  std::vector<std::pair<std::string, std::string>> attributes;
  int parent = -1;
  std::vector<int> children;

  bool is_element() const { return kind == Kind::kElement; }
};

class HtmlDocument {
 public:
  // Index of the <html> element. Documents without one get an implied root.
  int root() const { return root_; }
  const HtmlNode &node(int index) const { return nodes_[index]; }
  size_t size() const { return nodes_.size(); }

 private:
  friend HtmlDocument ParseHtml(std::string_view utf8);

  std::vector<HtmlNode> nodes_;
  int root_ = 0;
};

// Parses UTF-8 HTML. Never fails; malformed markup is repaired or ignored.
HtmlDocument ParseHtml(std::string_view utf8);

// Decodes named and numeric character references.
std::string DecodeEntities(std::string_view text);

}  // namespace domex

#endif  // DOMEX_HTML_H_
