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

// Locating and loading schema/lexicon/template triples from disk.

#ifndef M2C_ASSETS_H_
#define M2C_ASSETS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "m2c/lexicon.h"
#include "m2c/schema.h"
#include "m2c/template.h"

namespace m2c {

struct AssetPaths {
  std::filesystem::path schema;  // empty: core inventory only
  std::filesystem::path lexicon;
  std::filesystem::path templates;
};

struct AssetPack {
  AssetPaths paths;
  FeatureSchema schema;
  Lexicon lexicon;
  TemplateSet set;
};

// "assets/it/spatial" -> assets/it/schema.json (when present),
// assets/it/spatial.lexicon.json, assets/it/spatial.templates.json.
AssetPaths PackPaths(const std::filesystem::path& prefix);

// Every <root>/<lang>/<name>.templates.json, sorted by path.
std::vector<AssetPaths> FindAssetPacks(const std::filesystem::path& root);

// Parses and cross-validates all three files.
AssetPack LoadAssetPack(const AssetPaths& paths);

}  // namespace m2c

#endif  // M2C_ASSETS_H_
