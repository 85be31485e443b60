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

#include "m2c/functions.h"

namespace m2c {
namespace {

const std::vector<NumericFunction>& Registry() {
  static const std::vector<NumericFunction> registry = {
      {"diff", 2,
       [](std::span<const std::int64_t> v) -> std::optional<std::int64_t> {
         return v[0] - v[1];
       }},
      {"sum", 2,
       [](std::span<const std::int64_t> v) -> std::optional<std::int64_t> {
         return v[0] + v[1];
       }},
      {"hour_add", 2,
       [](std::span<const std::int64_t> v) -> std::optional<std::int64_t> {
         std::int64_t h = (v[0] + v[1]) % 24;
         return h < 0 ? h + 24 : h;
       }},
  };
  return registry;
}

}  // namespace

const NumericFunction* FindFunction(std::string_view name) {
  for (const NumericFunction& f : Registry()) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::vector<std::string> FunctionNames() {
  std::vector<std::string> names;
  for (const NumericFunction& f : Registry()) names.push_back(f.name);
  return names;
}

}  // namespace m2c
