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

#include "domex/text.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/ucnv.h>
#include <unicode/ucnv_err.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>
#include <memory>

#include "domex/errors.h"

namespace domex {

namespace {

std::string ToUtf8(const icu::UnicodeString &s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::string Nfc(const std::string &utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return utf8;
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(utf8);
  if (nfc->isNormalized(src, status) && U_SUCCESS(status)) return utf8;
  status = U_ZERO_ERROR;
  icu::UnicodeString dst = nfc->normalize(src, status);
  if (U_FAILURE(status)) return utf8;
  return ToUtf8(dst);
}

struct ConverterCloser {
  void operator()(UConverter *c) const { ucnv_close(c); }
};

}  // namespace

void AppendUtf8(char32_t cp, std::string *out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string NormalizeText(std::string_view utf8) {
  std::string collapsed;
  collapsed.reserve(utf8.size());
  const auto *s = reinterpret_cast<const uint8_t *>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  bool pending_space = false;
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) c = 0xFFFD;
    if (u_isUWhiteSpace(c)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) {
      collapsed.push_back(' ');
      pending_space = false;
    }
    AppendUtf8(static_cast<char32_t>(c), &collapsed);
  }
  return Nfc(collapsed);
}

std::string ToLower(std::string_view utf8) {
  bool ascii = std::all_of(utf8.begin(), utf8.end(),
                           [](char c) { return (c & 0x80) == 0; });
  if (ascii) {
    std::string out(utf8);
    for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  u.toLower(icu::Locale::getRoot());
  return ToUtf8(u);
}

std::vector<std::string> SplitCodePoints(std::string_view utf8) {
  std::vector<std::string> out;
  const auto *s = reinterpret_cast<const uint8_t *>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      out.emplace_back("\xEF\xBF\xBD");
    } else {
      out.emplace_back(utf8.substr(start, i - start));
    }
  }
  return out;
}

bool IsValidUtf8(std::string_view bytes) {
  const auto *s = reinterpret_cast<const uint8_t *>(bytes.data());
  const int32_t length = static_cast<int32_t>(bytes.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

bool ConvertToUtf8(std::string_view bytes, const std::string &charset,
                   std::string *out) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<UConverter, ConverterCloser> conv(
      ucnv_open(charset.c_str(), &status));
  if (U_FAILURE(status) || !conv) return false;
  ucnv_setToUCallBack(conv.get(), UCNV_TO_U_CALLBACK_STOP, nullptr, nullptr,
                      nullptr, &status);
  if (U_FAILURE(status)) return false;
  std::vector<UChar> buffer(bytes.size() * 2 + 16);
  int32_t n = ucnv_toUChars(conv.get(), buffer.data(),
                            static_cast<int32_t>(buffer.size()), bytes.data(),
                            static_cast<int32_t>(bytes.size()), &status);
  if (U_FAILURE(status)) return false;
  *out = ToUtf8(icu::UnicodeString(buffer.data(), n));
  return true;
}

std::string SniffDeclaredCharset(std::string_view bytes) {
  std::string head(bytes.substr(0, std::min<size_t>(bytes.size(), 4096)));
  for (char &c : head) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  size_t pos = 0;
  while ((pos = head.find("<meta", pos)) != std::string::npos) {
    size_t end = head.find('>', pos);
    if (end == std::string::npos) break;
    std::string_view tag(head.data() + pos, end - pos);
    size_t cs = tag.find("charset");
    if (cs != std::string_view::npos) {
      size_t i = cs + 7;
      while (i < tag.size() && (tag[i] == ' ' || tag[i] == '=' ||
                                tag[i] == '"' || tag[i] == '\'')) {
        ++i;
      }
      size_t j = i;
      while (j < tag.size() &&
             (std::isalnum(static_cast<unsigned char>(tag[j])) ||
              tag[j] == '-' || tag[j] == '_' || tag[j] == ':' || tag[j] == '.')) {
        ++j;
      }
      if (j > i) return std::string(tag.substr(i, j - i));
    }
    pos = end;
  }
  return "";
}

std::string DecodeHtmlBytes(std::string_view bytes) {
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") {
    bytes.remove_prefix(3);
    if (IsValidUtf8(bytes)) return std::string(bytes);
    throw Error(ErrorKind::kUnreadableInput, "invalid UTF-8 after BOM");
  }
  if (bytes.size() >= 2 && (bytes.substr(0, 2) == "\xFF\xFE" ||
                            bytes.substr(0, 2) == "\xFE\xFF")) {
    std::string out;
    const char *cs = bytes[0] == '\xFF' ? "UTF-16LE" : "UTF-16BE";
    if (ConvertToUtf8(bytes.substr(2), cs, &out)) return out;
    throw Error(ErrorKind::kUnreadableInput, "invalid UTF-16 content");
  }
  if (bytes.find('\0') != std::string_view::npos) {
    throw Error(ErrorKind::kUnreadableInput,
                "input contains NUL bytes; not a text document");
  }
  std::string declared = SniffDeclaredCharset(bytes);
  std::string out;
  if (!declared.empty() && declared != "utf-8" && declared != "utf8") {
    if (ConvertToUtf8(bytes, declared, &out)) return out;
  }
  if (IsValidUtf8(bytes)) return std::string(bytes);
  // Latin-1 maps every byte to the code point of the same value.
  out.clear();
  out.reserve(bytes.size() + bytes.size() / 4);
  for (unsigned char c : bytes) AppendUtf8(c, &out);
  return out;
}

}  // namespace domex
