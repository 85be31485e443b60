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

#ifndef M2C_JSON_UTIL_H_
#define M2C_JSON_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace m2c {

using Json = nlohmann::ordered_json;

// Parses a JSON document, rejecting duplicate object keys. `what` names the
// document in error messages.
Json ParseJsonStrict(std::string_view text, std::string_view what);

// Reads a whole file; throws Error(kIo) when it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Hex SHA-256 of a byte string.
std::string Sha256Hex(std::string_view bytes);

}  // namespace m2c

#endif  // M2C_JSON_UTIL_H_
