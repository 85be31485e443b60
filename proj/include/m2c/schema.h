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

// Morphological dimensions and the feature-set algebra built on them.
//
// A schema maps every feature identifier to exactly one dimension, so feature
// paths in templates and lexicons name features without qualifying them
// ("MASC.PL" rather than "GENDER=MASC;NUMBER=PL").

#ifndef M2C_SCHEMA_H_
#define M2C_SCHEMA_H_

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace m2c {

// The pseudo-dimension holding output transforms such as TO_CAPITALIZE.
inline constexpr std::string_view kTransformDimension = "TRANSFORM";
inline constexpr std::string_view kCapitalize = "TO_CAPITALIZE";

enum class DimensionOrigin { kCore, kCustom };

struct Dimension {
  std::string name;
  std::vector<std::string> features;
  DimensionOrigin origin = DimensionOrigin::kCustom;
};

struct Feature {
  std::string dimension;
  std::string name;
};

// An unordered set of features with at most one feature per dimension.
// Instances are only created through a FeatureSchema, which enforces that
// invariant; the empty set is always valid.
class FeatureSet {
 public:
  FeatureSet() = default;

  // Sorted by feature name.
  const std::vector<Feature>& features() const { return features_; }
  bool empty() const { return features_.empty(); }
  std::size_t size() const { return features_.size(); }

  bool Contains(std::string_view feature) const;
  std::optional<std::string_view> FeatureFor(std::string_view dimension) const;
  bool IsSubsetOf(const FeatureSet& other) const;
  FeatureSet WithoutDimension(std::string_view dimension) const;

  // Dot-joined, sorted feature names; "" for the empty set.
  std::string ToString() const;

  friend bool operator==(const FeatureSet& a, const FeatureSet& b);
  friend std::strong_ordering operator<=>(const FeatureSet& a,
                                          const FeatureSet& b);

  // Combines two sets. Throws Error(kFeatureConflict) when they carry
  // different features for the same dimension.
  static FeatureSet Union(const FeatureSet& a, const FeatureSet& b);

 private:
  friend class FeatureSchema;
  std::vector<Feature> features_;
};

class FeatureSchema {
 public:
  // The bundled core inventory.
  static const FeatureSchema& Core();

  // Declaration order: core dimensions first, then extensions in load order.
  const std::vector<Dimension>& dimensions() const { return dimensions_; }

  const Dimension* FindDimension(std::string_view name) const;
  bool HasFeature(std::string_view feature) const;

  // Throws Error(kUnknownFeature).
  std::string_view DimensionOf(std::string_view feature) const;

  // Throws Error(kUnknownFeature) or Error(kFeatureConflict).
  FeatureSet MakeFeatureSet(std::span<const std::string> names) const;

  // Parses a dot-joined key such as "MASC.PL"; "" is the empty set.
  FeatureSet ParseKey(std::string_view key) const;

  // Set-level equality: declaration order is irrelevant.
  friend bool operator==(const FeatureSchema& a, const FeatureSchema& b);

 private:
  friend FeatureSchema ExtendSchema(const FeatureSchema&, Dimension);
  void Add(Dimension dim);

  std::vector<Dimension> dimensions_;
  std::map<std::string, std::size_t, std::less<>> dimension_index_;
  std::map<std::string, std::string, std::less<>> feature_dimension_;
};

// Core inventory merged with the dimensions declared in `document`, a JSON
// list of {"name": ..., "features": [...]}.
FeatureSchema LoadSchema(std::string_view document);

// Merges another schema document on top of an existing schema.
FeatureSchema MergeSchemaDocument(const FeatureSchema& schema,
                                  std::string_view document);

// Returns a new schema with `dim` added; `schema` is left unchanged.
FeatureSchema ExtendSchema(const FeatureSchema& schema, Dimension dim);

FeatureSet MakeFeatureSet(const FeatureSchema& schema,
                          std::span<const std::string> names);

std::string DimensionOf(const FeatureSchema& schema, std::string_view feature);

// Serializes the custom dimensions only (core is implied).
std::string SerializeSchema(const FeatureSchema& schema);

bool IsUpperIdentifier(std::string_view text);

}  // namespace m2c

#endif  // M2C_SCHEMA_H_
