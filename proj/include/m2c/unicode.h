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

#ifndef M2C_UNICODE_H_
#define M2C_UNICODE_H_

#include <string>
#include <string_view>

namespace m2c::unicode {

// Canonical composition (NFC).
std::string ToNfc(std::string_view text);

// Uppercases the first scalar value with the simple (1:1) Unicode mapping.
// Locale-specific rules (Turkish dotted i) are not applied.
std::string CapitalizeFirst(std::string_view text);

// Simple case folding of the first scalar value only.
std::string FoldFirst(std::string_view text);

// Trims Unicode whitespace at both ends and collapses internal runs to a
// single ASCII space.
std::string CollapseWhitespace(std::string_view text);

// Escapes regular-expression metacharacters so `text` matches literally.
std::string RegexEscape(std::string_view text);

}  // namespace m2c::unicode

#endif  // M2C_UNICODE_H_
