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

#include "domex/html.h"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "domex/text.h"

namespace domex {

namespace {

// HTML 4 Latin-1 entity names for U+00A0..U+00FF, in code point order.
constexpr const char *kLatin1Entities[96] = {
    "nbsp",   "iexcl",  "cent",   "pound",  "curren", "yen",    "brvbar",
    "sect",   "uml",    "copy",   "ordf",   "laquo",  "not",    "shy",
    "reg",    "macr",   "deg",    "plusmn", "sup2",   "sup3",   "acute",
    "micro",  "para",   "middot", "cedil",  "sup1",   "ordm",   "raquo",
    "frac14", "frac12", "frac34", "iquest", "Agrave", "Aacute", "Acirc",
    "Atilde", "Auml",   "Aring",  "AElig",  "Ccedil", "Egrave", "Eacute",
    "Ecirc",  "Euml",   "Igrave", "Iacute", "Icirc",  "Iuml",   "ETH",
    "Ntilde", "Ograve", "Oacute", "Ocirc",  "Otilde", "Ouml",   "times",
    "Oslash", "Ugrave", "Uacute", "Ucirc",  "Uuml",   "Yacute", "THORN",
    "szlig",  "agrave", "aacute", "acirc",  "atilde", "auml",   "aring",
    "aelig",  "ccedil", "egrave", "eacute", "ecirc",  "euml",   "igrave",
    "iacute", "icirc",  "iuml",   "eth",    "ntilde", "ograve", "oacute",
    "ocirc",  "otilde", "ouml",   "divide", "oslash", "ugrave", "uacute",
    "ucirc",  "uuml",   "yacute", "thorn",  "yuml",
};

const std::unordered_map<std::string, char32_t> &EntityTable() {
  static const auto *table = [] {
    auto *t = new std::unordered_map<std::string, char32_t>{
        {"amp", '&'},        {"lt", '<'},         {"gt", '>'},
        {"quot", '"'},       {"apos", '\''},      {"euro", 0x20AC},
        {"trade", 0x2122},   {"hellip", 0x2026},  {"mdash", 0x2014},
        {"ndash", 0x2013},   {"lsquo", 0x2018},   {"rsquo", 0x2019},
        {"sbquo", 0x201A},   {"ldquo", 0x201C},   {"rdquo", 0x201D},
        {"bdquo", 0x201E},   {"bull", 0x2022},    {"dagger", 0x2020},
        {"Dagger", 0x2021},  {"permil", 0x2030},  {"lsaquo", 0x2039},
        {"rsaquo", 0x203A},  {"ensp", 0x2002},    {"emsp", 0x2003},
        {"thinsp", 0x2009},  {"zwnj", 0x200C},    {"zwj", 0x200D},
        {"lrm", 0x200E},     {"rlm", 0x200F},     {"larr", 0x2190},
        {"uarr", 0x2191},    {"rarr", 0x2192},    {"darr", 0x2193},
        {"hearts", 0x2665},  {"spades", 0x2660},  {"clubs", 0x2663},
        {"diams", 0x2666},   {"OElig", 0x152},    {"oelig", 0x153},
        {"Scaron", 0x160},   {"scaron", 0x161},   {"Yuml", 0x178},
        {"fnof", 0x192},     {"circ", 0x2C6},     {"tilde", 0x2DC},
        {"prime", 0x2032},   {"Prime", 0x2033},   {"minus", 0x2212},
    };
    for (int i = 0; i < 96; ++i) (*t)[kLatin1Entities[i]] = 0xA0 + i;
    return t;
  }();
  return *table;
}

// Windows-1252 reinterpretation of numeric references in 0x80..0x9F.
constexpr char32_t kCp1252[32] = {
    0x20AC, 0x81,   0x201A, 0x192,  0x201E, 0x2026, 0x2020, 0x2021,
    0x2C6,  0x2030, 0x160,  0x2039, 0x152,  0x8D,   0x17D,  0x8F,
    0x90,   0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x2DC,  0x2122, 0x161,  0x203A, 0x153,  0x9D,   0x17E,  0x178,
};

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool IsAlpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const std::unordered_set<std::string> &VoidElements() {
  static const auto *set = new std::unordered_set<std::string>{
      "area", "base",  "br",   "col",   "embed",  "hr",    "img",
      "input", "link", "meta", "param", "source", "track", "wbr",
      "keygen", "command", "basefont", "frame", "isindex"};
  return *set;
}

const std::unordered_set<std::string> &ClosesParagraph() {
  static const auto *set = new std::unordered_set<std::string>{
      "address", "article", "aside",  "blockquote", "center", "details",
      "dir",     "div",     "dl",     "dd",         "dt",     "fieldset",
      "figcaption", "figure", "footer", "form",     "h1",     "h2",
      "h3",      "h4",      "h5",     "h6",         "header", "hgroup",
      "hr",      "li",      "main",   "menu",       "nav",    "ol",
      "p",       "pre",     "section", "table",     "ul"};
  return *set;
}

const std::unordered_set<std::string> &ScopeBoundary() {
  static const auto *set = new std::unordered_set<std::string>{
      "html", "body", "table", "td", "th", "caption", "button",
      "object", "template", "marquee", "applet"};
  return *set;
}

class TreeBuilder {
 public:
  TreeBuilder(std::string_view src, std::vector<HtmlNode> *nodes)
      : src_(src), nodes_(nodes) {
    HtmlNode doc;
    doc.tag = "#document";
    nodes_->push_back(doc);
    stack_.push_back(0);
  }

  void Run() {
    size_t i = 0;
    const size_t n = src_.size();
    while (i < n) {
      if (src_[i] != '<') {
        size_t j = src_.find('<', i);
        if (j == std::string_view::npos) j = n;
        AddText(DecodeEntities(src_.substr(i, j - i)));
        i = j;
        continue;
      }
      if (src_.compare(i, 4, "<!--") == 0) {
        size_t j = src_.find("-->", i + 4);
        i = j == std::string_view::npos ? n : j + 3;
      } else if (src_.compare(i, 9, "<![CDATA[") == 0) {
        size_t j = src_.find("]]>", i + 9);
        i = j == std::string_view::npos ? n : j + 3;
      } else if (i + 1 < n && (src_[i + 1] == '!' || src_[i + 1] == '?')) {
        size_t j = src_.find('>', i + 2);
        i = j == std::string_view::npos ? n : j + 1;
      } else if (i + 2 < n && src_[i + 1] == '/' && IsAlpha(src_[i + 2])) {
        size_t j = i + 2;
        while (j < n && !IsSpace(src_[j]) && src_[j] != '>' && src_[j] != '/') ++j;
        std::string name = Lower(src_.substr(i + 2, j - i - 2));
        size_t close = src_.find('>', j);
        i = close == std::string_view::npos ? n : close + 1;
        EndTag(name);
      } else if (i + 1 < n && IsAlpha(src_[i + 1])) {
        i = StartTag(i);
      } else {
        AddText("<");
        ++i;
      }
    }
  }

  int FindRoot() {
    std::vector<HtmlNode> &nodes = *nodes_;
    for (int child : nodes[0].children) {
      if (nodes[child].is_element() && nodes[child].tag == "html") {
        nodes[child].parent = -1;
        return child;
      }
    }
    nodes[0].tag = "html";
    return 0;
  }

 private:
  int Current() const { return stack_.back(); }

  const std::string &TagOf(int index) const { return (*nodes_)[index].tag; }

  bool IsOpen(const std::string &tag) const {
    for (int idx : stack_) {
      if (TagOf(idx) == tag) return true;
    }
    return false;
  }

  void AddText(std::string text) {
    if (text.empty()) return;
    HtmlNode &parent = (*nodes_)[Current()];
    if (!parent.children.empty()) {
      HtmlNode &last = (*nodes_)[parent.children.back()];
      if (last.kind == HtmlNode::Kind::kText) {
        last.text += text;
        return;
      }
    }
    HtmlNode node;
    node.kind = HtmlNode::Kind::kText;
    node.text = std::move(text);
    Append(std::move(node));
  }

  int Append(HtmlNode node) {
    int index = static_cast<int>(nodes_->size());
    node.parent = Current();
    nodes_->push_back(std::move(node));
    (*nodes_)[Current()].children.push_back(index);
    return index;
  }

  // Pops up to and including the topmost element named |tag| that is found
  // before any of |stop| (and before the document node).
  bool CloseIfOpen(const std::string &tag,
                   const std::unordered_set<std::string> &stop) {
    for (size_t k = stack_.size(); k-- > 1;) {
      const std::string &t = TagOf(stack_[k]);
      if (t == tag) {
        stack_.resize(k);
        return true;
      }
      if (stop.count(t)) return false;
    }
    return false;
  }

  void ImpliedEnds(const std::string &tag) {
    static const std::unordered_set<std::string> kListStop = {
        "ul", "ol", "menu", "dir", "table", "body", "html"};
    static const std::unordered_set<std::string> kDlStop = {"dl", "table", "body",
                                                            "html"};
    static const std::unordered_set<std::string> kRowStop = {
        "table", "tbody", "thead", "tfoot", "body", "html"};
    static const std::unordered_set<std::string> kCellStop = {"tr", "table",
                                                              "body", "html"};
    static const std::unordered_set<std::string> kSectionStop = {"table", "body",
                                                                 "html"};
    if (ClosesParagraph().count(tag)) CloseIfOpen("p", ScopeBoundary());
    if (tag == "li") {
      CloseIfOpen("li", kListStop);
    } else if (tag == "dt" || tag == "dd") {
      if (!CloseIfOpen("dt", kDlStop)) CloseIfOpen("dd", kDlStop);
    } else if (tag == "tr") {
      CloseIfOpen("tr", kRowStop);
    } else if (tag == "td" || tag == "th") {
      if (!CloseIfOpen("td", kCellStop)) CloseIfOpen("th", kCellStop);
    } else if (tag == "tbody" || tag == "thead" || tag == "tfoot") {
      for (const char *t : {"tbody", "thead", "tfoot"}) {
        if (CloseIfOpen(t, kSectionStop)) break;
      }
    } else if (tag == "option") {
      if (TagOf(Current()) == "option") stack_.pop_back();
    }
  }

  size_t StartTag(size_t i) {
    const size_t n = src_.size();
    size_t j = i + 1;
    while (j < n && !IsSpace(src_[j]) && src_[j] != '>' && src_[j] != '/') ++j;
    HtmlNode node;
    node.tag = Lower(src_.substr(i + 1, j - i - 1));
    bool self_closing = false;
    // Attributes.
    while (j < n && src_[j] != '>') {
      if (IsSpace(src_[j])) {
        ++j;
        continue;
      }
      if (src_[j] == '/') {
        self_closing = j + 1 < n && src_[j + 1] == '>';
        ++j;
        continue;
      }
      size_t k = j;
      while (k < n && !IsSpace(src_[k]) && src_[k] != '=' && src_[k] != '>' &&
             !(src_[k] == '/' && k + 1 < n && src_[k + 1] == '>')) {
        ++k;
      }
      std::string name = Lower(src_.substr(j, k - j));
      std::string value;
      while (k < n && IsSpace(src_[k])) ++k;
      if (k < n && src_[k] == '=') {
        ++k;
        while (k < n && IsSpace(src_[k])) ++k;
        if (k < n && (src_[k] == '"' || src_[k] == '\'')) {
          char quote = src_[k];
          size_t end = src_.find(quote, k + 1);
          if (end == std::string_view::npos) end = n;
          value = DecodeEntities(src_.substr(k + 1, end - k - 1));
          k = end < n ? end + 1 : n;
        } else {
          size_t end = k;
          while (end < n && !IsSpace(src_[end]) && src_[end] != '>') ++end;
          value = DecodeEntities(src_.substr(k, end - k));
          k = end;
        }
      }
      if (k == j) k = j + 1;
      if (!name.empty()) node.attributes.emplace_back(std::move(name), std::move(value));
      j = k;
    }
    size_t next = j < n ? j + 1 : n;
    const std::string tag = node.tag;

    // Repeated structural elements are merged into the open one.
    if ((tag == "html" || tag == "body" || tag == "head") && IsOpen(tag)) return next;

    ImpliedEnds(tag);
    int index = Append(std::move(node));
    if (VoidElements().count(tag) || self_closing) return next;

    if (tag == "script" || tag == "style" || tag == "title" || tag == "textarea" ||
        tag == "xmp" || tag == "plaintext") {
      size_t end = FindRawTextEnd(next, tag);
      if (tag != "script" && tag != "style") {
        HtmlNode text;
        text.kind = HtmlNode::Kind::kText;
        text.text = DecodeEntities(src_.substr(next, end - next));
        text.parent = index;
        int text_index = static_cast<int>(nodes_->size());
        nodes_->push_back(std::move(text));
        (*nodes_)[index].children.push_back(text_index);
      }
      if (end >= n) return n;
      size_t close = src_.find('>', end);
      return close == std::string_view::npos ? n : close + 1;
    }
    stack_.push_back(index);
    return next;
  }

  size_t FindRawTextEnd(size_t from, const std::string &tag) const {
    const size_t n = src_.size();
    for (size_t k = src_.find("</", from); k != std::string_view::npos;
         k = src_.find("</", k + 2)) {
      if (k + 2 + tag.size() > n) break;
      if (Lower(src_.substr(k + 2, tag.size())) == tag) {
        size_t after = k + 2 + tag.size();
        if (after >= n || IsSpace(src_[after]) || src_[after] == '>' ||
            src_[after] == '/') {
          return k;
        }
      }
    }
    return n;
  }

  void EndTag(const std::string &tag) {
    if (tag == "html" || tag == "body" || tag == "head") return;
    for (size_t k = stack_.size(); k-- > 1;) {
      if (TagOf(stack_[k]) == tag) {
        stack_.resize(k);
        return;
      }
    }
  }

  std::string_view src_;
  std::vector<HtmlNode> *nodes_;
  std::vector<int> stack_;
};

}  // namespace

std::string DecodeEntities(std::string_view text) {
  if (text.find('&') == std::string_view::npos) return std::string(text);
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c != '&') {
      out.push_back(c);
      ++i;
      continue;
    }
    if (i + 1 < n && text[i + 1] == '#') {
      size_t j = i + 2;
      bool hex = j < n && (text[j] == 'x' || text[j] == 'X');
      if (hex) ++j;
      size_t start = j;
      uint32_t value = 0;
      while (j < n && (hex ? std::isxdigit(static_cast<unsigned char>(text[j]))
                           : std::isdigit(static_cast<unsigned char>(text[j])))) {
        if (value < 0x110000) {
          int digit = std::isdigit(static_cast<unsigned char>(text[j]))
                          ? text[j] - '0'
                          : std::tolower(static_cast<unsigned char>(text[j])) - 'a' + 10;
          value = value * (hex ? 16 : 10) + digit;
        }
        ++j;
      }
      if (j == start) {
        out.push_back('&');
        ++i;
        continue;
      }
      if (j < n && text[j] == ';') ++j;
      char32_t cp = value;
      if (cp >= 0x80 && cp <= 0x9F) cp = kCp1252[cp - 0x80];
      if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
      AppendUtf8(cp, &out);
      i = j;
      continue;
    }
    size_t j = i + 1;
    while (j < n && std::isalnum(static_cast<unsigned char>(text[j])) && j - i <= 10) ++j;
    std::string name(text.substr(i + 1, j - i - 1));
    const auto &table = EntityTable();
    auto it = table.find(name);
    if (it != table.end()) {
      bool terminated = j < n && text[j] == ';';
      // Legacy references are accepted without the trailing semicolon.
      static const std::unordered_set<std::string> kLegacy = {"amp", "lt", "gt",
                                                              "quot", "nbsp"};
      if (terminated || kLegacy.count(name)) {
        AppendUtf8(it->second, &out);
        i = terminated ? j + 1 : j;
        continue;
      }
    }
    out.push_back('&');
    ++i;
  }
  return out;
}

HtmlDocument ParseHtml(std::string_view utf8) {
  HtmlDocument doc;
  TreeBuilder builder(utf8, &doc.nodes_);
  builder.Run();
  doc.root_ = builder.FindRoot();
  return doc;
}

}  // namespace domex
