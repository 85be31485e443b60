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

#ifndef M2C_FUNCTIONS_H_
#define M2C_FUNCTIONS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace m2c {

// A template function over the numeric values of its argument entries. The
// result is mapped back to the entry of the first argument's type carrying
// that numeric value.
struct NumericFunction {
  std::string name;
  std::size_t arity = 0;
  std::function<std::optional<std::int64_t>(std::span<const std::int64_t>)>
      apply;
};

// Registered: diff(a,b) = a-b, sum(a,b) = a+b, hour_add(h,d) = (h+d) mod 24.
const NumericFunction* FindFunction(std::string_view name);
std::vector<std::string> FunctionNames();

}  // namespace m2c

#endif  // M2C_FUNCTIONS_H_
