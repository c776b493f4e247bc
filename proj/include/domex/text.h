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

// Unicode text helpers backed by ICU.

#ifndef DOMEX_TEXT_H_
#define DOMEX_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace domex {

// Collapses whitespace runs (any Unicode white space, including NBSP) to a
// single space, trims both ends and applies NFC. Input must be UTF-8.
std::string NormalizeText(std::string_view utf8);

// Unicode lowercase (root locale).
std::string ToLower(std::string_view utf8);

// Splits UTF-8 into code points, each returned as its UTF-8 encoding.
std::vector<std::string> SplitCodePoints(std::string_view utf8);

bool IsValidUtf8(std::string_view bytes);

// Converts bytes in the named charset to UTF-8. Returns false when ICU does
// not know the charset or the conversion reports an error.
bool ConvertToUtf8(std::string_view bytes, const std::string &charset,
                   std::string *out);

// Decodes an HTML byte string: BOM, then the declared charset, then UTF-8,
// then Latin-1. Throws Error(kUnreadableInput) for binary input.
std::string DecodeHtmlBytes(std::string_view bytes);

// Looks for <meta charset=...> or a content-type meta in the first bytes.
std::string SniffDeclaredCharset(std::string_view bytes);

// Appends the UTF-8 encoding of a code point.
void AppendUtf8(char32_t cp, std::string *out);

}  // namespace domex

#endif  // DOMEX_TEXT_H_
