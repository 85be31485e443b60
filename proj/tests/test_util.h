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

// Shared helpers for the unit tests.

#ifndef M2C_TESTS_TEST_UTIL_H_
#define M2C_TESTS_TEST_UTIL_H_

#include <stdlib.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "m2c/error.h"
#include "m2c/schema.h"

namespace m2c::testing {

inline std::filesystem::path AssetDir() { return M2C_ASSET_DIR; }

inline FeatureSet Set(const FeatureSchema& schema,
                      std::vector<std::string> names) {
  return schema.MakeFeatureSet(names);
}

// Runs `body` and returns the code of the m2c::Error it throws.
template <typename Body>
std::optional<ErrorCode> CodeOf(Body body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline TempDir::TempDir() {
  std::string pattern =
      (std::filesystem::temp_directory_path() / "m2c-test-XXXXXX").string();
  path_ = mkdtemp(pattern.data());
}

inline TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace m2c::testing

#endif  // M2C_TESTS_TEST_UTIL_H_
