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

// Placeholder value inventories: invariant strings or inflection tables
// keyed by feature sets.

#ifndef M2C_LEXICON_H_
#define M2C_LEXICON_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "m2c/schema.h"

namespace m2c {

using Form = std::pair<FeatureSet, std::string>;

struct LexiconEntry {
  std::string id;
  // Features the value carries inherently, e.g. a name's gender.
  FeatureSet intrinsic;
  // File order is the canonical order. An invariant entry has a single form
  // keyed by the empty set.
  std::vector<Form> forms;
  std::optional<std::int64_t> numeric;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

struct LexiconType {
  std::string name;
  std::vector<LexiconEntry> entries;

  friend bool operator==(const LexiconType&, const LexiconType&) = default;
};

class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<LexiconType> types);

  const std::vector<LexiconType>& types() const { return types_; }
  const LexiconType* FindType(std::string_view name) const;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;

 private:
  std::vector<LexiconType> types_;
};

// Checks key validity, key distinctness, and intrinsic/form consistency.
// Throws Error(kLexicon).
void ValidateEntry(const LexiconEntry& entry);

Lexicon LoadLexicon(std::string_view document, const FeatureSchema& schema);
std::string SerializeLexicon(const Lexicon& lexicon);

// The stored key that `required` selects: the exact key when present,
// otherwise the unique minimal superset. Transform features must already be
// stripped. Throws Error(kMissingInflection) or Error(kAmbiguousInflection).
const Form& SelectForm(const LexiconEntry& entry, const FeatureSet& required);

// Surface string for `required`, with transform features applied after
// lookup.
std::string LookupForm(const LexiconEntry& entry, const FeatureSet& required);

std::vector<Form> Variants(const LexiconEntry& entry);

// The entry's feature for `dimension`: the intrinsic one when declared,
// otherwise the feature every form key agrees on. Throws
// Error(kUnresolvedDimension) when neither determines it.
std::string IntrinsicFeature(const LexiconEntry& entry,
                             std::string_view dimension,
                             const FeatureSchema& schema);

// Like IntrinsicFeature but returns nullopt instead of throwing.
std::optional<std::string> TryIntrinsicFeature(const LexiconEntry& entry,
                                               std::string_view dimension);

}  // namespace m2c

#endif  // M2C_LEXICON_H_
