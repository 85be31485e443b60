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

#ifndef M2C_EMBEDDED_H_
#define M2C_EMBEDDED_H_

#include <string_view>

namespace m2c {

// Documents compiled into the library from assets/ at build time.
std::string_view CoreSchemaDocument();
std::string_view DefaultPromptLabelsDocument();

}  // namespace m2c

#endif  // M2C_EMBEDDED_H_
