// Copyright 2026 The M2C Authors
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

#include "m2c/unicode.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "m2c/error.h"

namespace m2c::unicode {
namespace {

std::string ToUtf8(const icu::UnicodeString& text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

icu::UnicodeString FromUtf8(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

// Applies `map` to the first code point and leaves the tail byte-identical.
template <typename Map>
std::string MapFirst(std::string_view text, Map map) {
  if (text.empty()) return std::string();
  int32_t offset = 0;
  UChar32 c = 0;
  U8_NEXT(reinterpret_cast<const uint8_t*>(text.data()), offset,
          static_cast<int32_t>(text.size()), c);
  if (c < 0) return std::string(text);
  UChar32 mapped = map(c);
  std::string out;
  char buffer[U8_MAX_LENGTH];
  int32_t length = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buffer), length, U8_MAX_LENGTH, mapped,
            error);
  if (error) return std::string(text);
  out.append(buffer, static_cast<std::size_t>(length));
  out.append(text.substr(static_cast<std::size_t>(offset)));
  return out;
}

}  // namespace

std::string ToNfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kValidation, "ICU NFC normalizer unavailable");
  }
  icu::UnicodeString normalized = nfc->normalize(FromUtf8(text), status);
  if (U_FAILURE(status)) return std::string(text);
  return ToUtf8(normalized);
}

std::string CapitalizeFirst(std::string_view text) {
  return MapFirst(text, [](UChar32 c) { return u_toupper(c); });
}

std::string FoldFirst(std::string_view text) {
  return MapFirst(text,
                  [](UChar32 c) { return u_foldCase(c, U_FOLD_CASE_DEFAULT); });
}

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  int32_t offset = 0;
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  while (offset < length) {
    int32_t start = offset;
    UChar32 c = 0;
    U8_NEXT(bytes, offset, length, c);
    if (c >= 0 && u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.append(text.substr(static_cast<std::size_t>(start),
                           static_cast<std::size_t>(offset - start)));
  }
  return out;
}

std::string RegexEscape(std::string_view text) {
  static constexpr std::string_view kMeta = "\\^$.|?*+()[]{}";
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (kMeta.find(c) != std::string_view::npos) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace m2c::unicode
