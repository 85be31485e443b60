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

#include "m2c/assets.h"

#include <algorithm>

#include "m2c/error.h"
#include "m2c/json_util.h"

namespace m2c {

AssetPaths PackPaths(const std::filesystem::path& prefix) {
  AssetPaths paths;
  std::filesystem::path dir = prefix.parent_path();
  std::string stem = prefix.filename().string();
  if (std::filesystem::exists(dir / "schema.json")) {
    paths.schema = dir / "schema.json";
  }
  paths.lexicon = dir / (stem + ".lexicon.json");
  paths.templates = dir / (stem + ".templates.json");
  return paths;
}

std::vector<AssetPaths> FindAssetPacks(const std::filesystem::path& root) {
  static constexpr std::string_view kSuffix = ".templates.json";
  std::vector<std::filesystem::path> prefixes;
  std::error_code ec;
  for (const auto& lang : std::filesystem::directory_iterator(root, ec)) {
    if (!lang.is_directory()) continue;
    for (const auto& file : std::filesystem::directory_iterator(lang)) {
      std::string name = file.path().filename().string();
      if (name.size() > kSuffix.size() && name.ends_with(kSuffix)) {
        prefixes.push_back(lang.path() /
                           name.substr(0, name.size() - kSuffix.size()));
      }
    }
  }
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot list " + root.string() + ": " + ec.message());
  }
  std::sort(prefixes.begin(), prefixes.end());
  std::vector<AssetPaths> out;
  for (const auto& prefix : prefixes) out.push_back(PackPaths(prefix));
  return out;
}

AssetPack LoadAssetPack(const AssetPaths& paths) {
  auto annotate = [](const std::filesystem::path& path, const auto& body) {
    try {
      return body();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIo) throw;
      throw Error(e.code(), path.string() + ": " + e.what());
    }
  };
  std::string schema_text =
      paths.schema.empty() ? std::string("[]") : ReadFile(paths.schema);
  std::string lexicon_text = ReadFile(paths.lexicon);
  std::string template_text = ReadFile(paths.templates);
  FeatureSchema schema =
      annotate(paths.schema, [&] { return LoadSchema(schema_text); });
  Lexicon lexicon = annotate(
      paths.lexicon, [&] { return LoadLexicon(lexicon_text, schema); });
  TemplateSet set = annotate(paths.templates, [&] {
    TemplateSet parsed = ParseTemplateSet(template_text);
    ValidateTemplateSet(parsed, schema, lexicon);
    return parsed;
  });
  return AssetPack{paths, std::move(schema), std::move(lexicon),
                   std::move(set)};
}

}  // namespace m2c
