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

#include "m2c/schema.h"

#include <algorithm>
#include <set>

#include "m2c/embedded.h"
#include "m2c/error.h"
#include "m2c/json_util.h"

namespace m2c {
namespace {

std::vector<Dimension> ParseDimensions(std::string_view document,
                                       DimensionOrigin origin) {
  Json doc = ParseJsonStrict(document, "schema");
  if (!doc.is_array()) {
    throw Error(ErrorCode::kSchema, "schema: top level must be a list");
  }
  std::vector<Dimension> dims;
  for (const Json& item : doc) {
    if (!item.is_object() || !item.contains("name") ||
        !item["name"].is_string() || !item.contains("features") ||
        !item["features"].is_array()) {
      throw Error(ErrorCode::kSchema,
                  "schema: each dimension needs a name and a feature list");
    }
    Dimension dim;
    dim.name = item["name"].get<std::string>();
    dim.origin = origin;
    for (const Json& f : item["features"]) {
      if (!f.is_string()) {
        throw Error(ErrorCode::kSchema,
                    "schema: features of " + dim.name + " must be strings");
      }
      dim.features.push_back(f.get<std::string>());
    }
    dims.push_back(std::move(dim));
  }
  return dims;
}

}  // namespace

bool IsUpperIdentifier(std::string_view text) {
  if (text.empty()) return false;
  if (!(text[0] >= 'A' && text[0] <= 'Z')) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

// FeatureSet

bool FeatureSet::Contains(std::string_view feature) const {
  return std::any_of(features_.begin(), features_.end(),
                     [&](const Feature& f) { return f.name == feature; });
}

std::optional<std::string_view> FeatureSet::FeatureFor(
    std::string_view dimension) const {
  for (const Feature& f : features_) {
    if (f.dimension == dimension) return f.name;
  }
  return std::nullopt;
}

bool FeatureSet::IsSubsetOf(const FeatureSet& other) const {
  return std::all_of(features_.begin(), features_.end(),
                     [&](const Feature& f) { return other.Contains(f.name); });
}

FeatureSet FeatureSet::WithoutDimension(std::string_view dimension) const {
  FeatureSet out;
  for (const Feature& f : features_) {
    if (f.dimension != dimension) out.features_.push_back(f);
  }
  return out;
}

std::string FeatureSet::ToString() const {
  std::string out;
  for (const Feature& f : features_) {
    if (!out.empty()) out.push_back('.');
    out += f.name;
  }
  return out;
}

bool operator==(const FeatureSet& a, const FeatureSet& b) {
  return std::equal(a.features_.begin(), a.features_.end(),
                    b.features_.begin(), b.features_.end(),
                    [](const Feature& x, const Feature& y) {
                      return x.name == y.name;
                    });
}

std::strong_ordering operator<=>(const FeatureSet& a, const FeatureSet& b) {
  return std::lexicographical_compare_three_way(
      a.features_.begin(), a.features_.end(), b.features_.begin(),
      b.features_.end(), [](const Feature& x, const Feature& y) {
        return x.name <=> y.name;
      });
}

FeatureSet FeatureSet::Union(const FeatureSet& a, const FeatureSet& b) {
  FeatureSet out = a;
  for (const Feature& f : b.features_) {
    if (auto existing = out.FeatureFor(f.dimension)) {
      if (*existing != f.name) {
        throw Error(ErrorCode::kFeatureConflict,
                    "features " + std::string(*existing) + " and " + f.name +
                        " both belong to dimension " + f.dimension);
      }
      continue;
    }
    out.features_.push_back(f);
  }
  std::sort(out.features_.begin(), out.features_.end(),
            [](const Feature& x, const Feature& y) { return x.name < y.name; });
  return out;
}

// FeatureSchema

const FeatureSchema& FeatureSchema::Core() {
  static const FeatureSchema core = [] {
    FeatureSchema schema;
    for (Dimension& dim :
         ParseDimensions(CoreSchemaDocument(), DimensionOrigin::kCore)) {
      schema.Add(std::move(dim));
    }
    return schema;
  }();
  return core;
}

void FeatureSchema::Add(Dimension dim) {
  if (!IsUpperIdentifier(dim.name)) {
    throw Error(ErrorCode::kSchema,
                "dimension name must be an uppercase identifier: '" +
                    dim.name + "'");
  }
  if (dim.features.empty()) {
    throw Error(ErrorCode::kSchema,
                "dimension " + dim.name + " has an empty feature list");
  }
  if (dimension_index_.count(dim.name) != 0) {
    throw Error(ErrorCode::kSchema, "duplicate dimension " + dim.name);
  }
  std::set<std::string_view> seen;
  for (const std::string& f : dim.features) {
    if (!IsUpperIdentifier(f)) {
      throw Error(ErrorCode::kSchema,
                  "feature must be an uppercase identifier: '" + f + "'");
    }
    if (!seen.insert(f).second) {
      throw Error(ErrorCode::kSchema,
                  "feature " + f + " listed twice in " + dim.name);
    }
    if (auto it = feature_dimension_.find(f); it != feature_dimension_.end()) {
      throw Error(ErrorCode::kSchema, "feature " + f + " of " + dim.name +
                                          " already belongs to " + it->second);
    }
  }
  for (const std::string& f : dim.features) feature_dimension_[f] = dim.name;
  dimension_index_[dim.name] = dimensions_.size();
  dimensions_.push_back(std::move(dim));
}

const Dimension* FeatureSchema::FindDimension(std::string_view name) const {
  auto it = dimension_index_.find(name);
  return it == dimension_index_.end() ? nullptr : &dimensions_[it->second];
}

bool FeatureSchema::HasFeature(std::string_view feature) const {
  return feature_dimension_.find(feature) != feature_dimension_.end();
}

std::string_view FeatureSchema::DimensionOf(std::string_view feature) const {
  auto it = feature_dimension_.find(feature);
  if (it == feature_dimension_.end()) {
    throw Error(ErrorCode::kUnknownFeature,
                "unknown feature '" + std::string(feature) + "'");
  }
  return it->second;
}

FeatureSet FeatureSchema::MakeFeatureSet(
    std::span<const std::string> names) const {
  FeatureSet out;
  for (const std::string& name : names) {
    std::string dim(DimensionOf(name));
    if (auto existing = out.FeatureFor(dim)) {
      if (*existing == name) continue;
      throw Error(ErrorCode::kFeatureConflict,
                  "features " + std::string(*existing) + " and " + name +
                      " both belong to dimension " + dim);
    }
    out.features_.push_back(Feature{std::move(dim), name});
  }
  std::sort(out.features_.begin(), out.features_.end(),
            [](const Feature& x, const Feature& y) { return x.name < y.name; });
  return out;
}

FeatureSet FeatureSchema::ParseKey(std::string_view key) const {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= key.size() && !key.empty()) {
    std::size_t dot = key.find('.', start);
    std::string_view part = key.substr(
        start, dot == std::string_view::npos ? std::string_view::npos
                                             : dot - start);
    if (part.empty()) {
      throw Error(ErrorCode::kParse,
                  "empty feature in key '" + std::string(key) + "'");
    }
    names.emplace_back(part);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return MakeFeatureSet(names);
}

bool operator==(const FeatureSchema& a, const FeatureSchema& b) {
  if (a.dimensions_.size() != b.dimensions_.size()) return false;
  for (const Dimension& dim : a.dimensions_) {
    const Dimension* other = b.FindDimension(dim.name);
    if (other == nullptr || other->origin != dim.origin) return false;
    std::set<std::string> x(dim.features.begin(), dim.features.end());
    std::set<std::string> y(other->features.begin(), other->features.end());
    if (x != y) return false;
  }
  return true;
}

FeatureSchema ExtendSchema(const FeatureSchema& schema, Dimension dim) {
  FeatureSchema out = schema;
  out.Add(std::move(dim));
  return out;
}

FeatureSchema MergeSchemaDocument(const FeatureSchema& schema,
                                  std::string_view document) {
  FeatureSchema out = schema;
  for (Dimension& dim :
       ParseDimensions(document, DimensionOrigin::kCustom)) {
    out = ExtendSchema(out, std::move(dim));
  }
  return out;
}

FeatureSchema LoadSchema(std::string_view document) {
  return MergeSchemaDocument(FeatureSchema::Core(), document);
}

FeatureSet MakeFeatureSet(const FeatureSchema& schema,
                          std::span<const std::string> names) {
  return schema.MakeFeatureSet(names);
}

std::string DimensionOf(const FeatureSchema& schema,
                        std::string_view feature) {
  return std::string(schema.DimensionOf(feature));
}

std::string SerializeSchema(const FeatureSchema& schema) {
  Json doc = Json::array();
  for (const Dimension& dim : schema.dimensions()) {
    if (dim.origin != DimensionOrigin::kCustom) continue;
    doc.push_back(Json{{"name", dim.name}, {"features", dim.features}});
  }
  return doc.dump(2);
}

}  // namespace m2c
