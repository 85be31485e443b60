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

#include "m2c/lexicon.h"

#include <set>

#include "m2c/error.h"
#include "m2c/json_util.h"
#include "m2c/unicode.h"

namespace m2c {
namespace {

std::vector<std::string> FeatureNames(const Json& value,
                                      const std::string& where) {
  std::vector<std::string> names;
  if (value.is_string()) {
    std::string text = value.get<std::string>();
    std::size_t start = 0;
    while (!text.empty()) {
      std::size_t dot = text.find('.', start);
      names.push_back(text.substr(start, dot - start));
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return names;
  }
  if (!value.is_array()) {
    throw Error(ErrorCode::kLexicon,
                where + ": intrinsic must be a list or dotted string");
  }
  for (const Json& f : value) {
    if (!f.is_string()) {
      throw Error(ErrorCode::kLexicon, where + ": features must be strings");
    }
    names.push_back(f.get<std::string>());
  }
  return names;
}

FeatureSet ParseFeatures(const FeatureSchema& schema,
                         const std::vector<std::string>& names,
                         const std::string& where) {
  try {
    return schema.MakeFeatureSet(names);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.what());
  }
}

LexiconEntry ParseEntry(const Json& item, const FeatureSchema& schema,
                        const std::string& where) {
  LexiconEntry entry;
  if (item.is_string()) {
    entry.id = item.get<std::string>();
    entry.forms.emplace_back(FeatureSet(), entry.id);
    return entry;
  }
  if (!item.is_object()) {
    throw Error(ErrorCode::kLexicon,
                where + ": entry must be a string or an object");
  }
  for (const auto& [key, _] : item.items()) {
    if (key != "id" && key != "intrinsic" && key != "forms" &&
        key != "numeric") {
      throw Error(ErrorCode::kLexicon,
                  where + ": unexpected field '" + key + "'");
    }
  }
  if (!item.contains("id") || !item["id"].is_string()) {
    throw Error(ErrorCode::kLexicon, where + ": entry needs a string id");
  }
  entry.id = item["id"].get<std::string>();
  std::string entry_where = where + " '" + entry.id + "'";
  if (item.contains("intrinsic")) {
    entry.intrinsic = ParseFeatures(
        schema, FeatureNames(item["intrinsic"], entry_where), entry_where);
  }
  if (item.contains("numeric")) {
    if (!item["numeric"].is_number_integer()) {
      throw Error(ErrorCode::kLexicon,
                  entry_where + ": numeric must be an integer");
    }
    entry.numeric = item["numeric"].get<std::int64_t>();
  }
  if (item.contains("forms")) {
    const Json& forms = item["forms"];
    if (!forms.is_object() || forms.empty()) {
      throw Error(ErrorCode::kLexicon,
                  entry_where + ": forms must be a non-empty object");
    }
    for (const auto& [key, surface] : forms.items()) {
      if (!surface.is_string()) {
        throw Error(ErrorCode::kLexicon,
                    entry_where + ": form '" + key + "' must be a string");
      }
      FeatureSet fs;
      try {
        fs = schema.ParseKey(key);
      } catch (const Error& e) {
        throw Error(e.code(), entry_where + ": " + e.what());
      }
      entry.forms.emplace_back(std::move(fs), surface.get<std::string>());
    }
  } else {
    entry.forms.emplace_back(FeatureSet(), entry.id);
  }
  try {
    ValidateEntry(entry);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.what());
  }
  return entry;
}

}  // namespace

Lexicon::Lexicon(std::vector<LexiconType> types) : types_(std::move(types)) {}

const LexiconType* Lexicon::FindType(std::string_view name) const {
  for (const LexiconType& type : types_) {
    if (type.name == name) return &type;
  }
  return nullptr;
}

void ValidateEntry(const LexiconEntry& entry) {
  if (entry.forms.empty()) {
    throw Error(ErrorCode::kLexicon, "entry '" + entry.id + "' has no forms");
  }
  for (std::size_t i = 0; i < entry.forms.size(); ++i) {
    const FeatureSet& key = entry.forms[i].first;
    if (key.FeatureFor(kTransformDimension)) {
      throw Error(ErrorCode::kLexicon,
                  "entry '" + entry.id + "': transform feature in form key");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (entry.forms[j].first == key) {
        throw Error(ErrorCode::kLexicon, "entry '" + entry.id +
                                             "': duplicate form key '" +
                                             key.ToString() + "'");
      }
    }
    for (const Feature& f : entry.intrinsic.features()) {
      auto keyed = key.FeatureFor(f.dimension);
      if (keyed && *keyed != f.name) {
        throw Error(ErrorCode::kLexicon,
                    "entry '" + entry.id + "': intrinsic " + f.name +
                        " conflicts with form key '" + key.ToString() + "'");
      }
    }
  }
}

Lexicon LoadLexicon(std::string_view document, const FeatureSchema& schema) {
  Json doc = ParseJsonStrict(document, "lexicon");
  if (!doc.is_object()) {
    throw Error(ErrorCode::kLexicon,
                "lexicon: top level must map type names to entry lists");
  }
  std::vector<LexiconType> types;
  for (const auto& [name, list] : doc.items()) {
    std::string where = "lexicon type '" + name + "'";
    if (!list.is_array() || list.empty()) {
      throw Error(ErrorCode::kLexicon, where + ": needs a non-empty list");
    }
    LexiconType type{name, {}};
    std::set<std::string> ids;
    for (const Json& item : list) {
      LexiconEntry entry = ParseEntry(item, schema, where);
      if (!ids.insert(entry.id).second) {
        throw Error(ErrorCode::kLexicon,
                    where + ": duplicate entry id '" + entry.id + "'");
      }
      type.entries.push_back(std::move(entry));
    }
    types.push_back(std::move(type));
  }
  return Lexicon(std::move(types));
}

std::string SerializeLexicon(const Lexicon& lexicon) {
  Json doc = Json::object();
  for (const LexiconType& type : lexicon.types()) {
    Json list = Json::array();
    for (const LexiconEntry& entry : type.entries) {
      bool plain = entry.intrinsic.empty() && !entry.numeric &&
                   entry.forms.size() == 1 && entry.forms[0].first.empty() &&
                   entry.forms[0].second == entry.id;
      if (plain) {
        list.push_back(entry.id);
        continue;
      }
      Json item = Json::object();
      item["id"] = entry.id;
      if (!entry.intrinsic.empty()) {
        Json intrinsic = Json::array();
        for (const Feature& f : entry.intrinsic.features()) {
          intrinsic.push_back(f.name);
        }
        item["intrinsic"] = std::move(intrinsic);
      }
      Json forms = Json::object();
      for (const auto& [key, surface] : entry.forms) {
        forms[key.ToString()] = surface;
      }
      item["forms"] = std::move(forms);
      if (entry.numeric) item["numeric"] = *entry.numeric;
      list.push_back(std::move(item));
    }
    doc[type.name] = std::move(list);
  }
  return doc.dump(2);
}

const Form& SelectForm(const LexiconEntry& entry,
                       const FeatureSet& required) {
  for (const Form& form : entry.forms) {
    if (form.first == required) return form;
  }
  std::vector<const Form*> supersets;
  for (const Form& form : entry.forms) {
    if (required.IsSubsetOf(form.first)) supersets.push_back(&form);
  }
  std::vector<const Form*> minimal;
  for (const Form* candidate : supersets) {
    bool has_smaller = false;
    for (const Form* other : supersets) {
      if (other != candidate && other->first.size() < candidate->first.size() &&
          other->first.IsSubsetOf(candidate->first)) {
        has_smaller = true;
        break;
      }
    }
    if (!has_smaller) minimal.push_back(candidate);
  }
  if (minimal.empty()) {
    throw Error(ErrorCode::kMissingInflection,
                "entry '" + entry.id + "' has no form for {" +
                    required.ToString() + "}");
  }
  if (minimal.size() > 1) {
    std::string keys;
    for (const Form* f : minimal) {
      keys += (keys.empty() ? "" : ", ") + std::string("{") +
              f->first.ToString() + "}";
    }
    throw Error(ErrorCode::kAmbiguousInflection,
                "entry '" + entry.id + "': {" + required.ToString() +
                    "} matches several forms: " + keys);
  }
  return *minimal.front();
}

std::string LookupForm(const LexiconEntry& entry,
                       const FeatureSet& required) {
  const Form& form =
      SelectForm(entry, required.WithoutDimension(kTransformDimension));
  if (required.Contains(kCapitalize)) {
    return unicode::CapitalizeFirst(form.second);
  }
  return form.second;
}

std::vector<Form> Variants(const LexiconEntry& entry) { return entry.forms; }

std::optional<std::string> TryIntrinsicFeature(const LexiconEntry& entry,
                                               std::string_view dimension) {
  if (auto f = entry.intrinsic.FeatureFor(dimension)) return std::string(*f);
  std::optional<std::string> agreed;
  for (const auto& [key, _] : entry.forms) {
    auto f = key.FeatureFor(dimension);
    if (!f) return std::nullopt;
    if (agreed && *agreed != *f) return std::nullopt;
    agreed = std::string(*f);
  }
  return agreed;
}

std::string IntrinsicFeature(const LexiconEntry& entry,
                             std::string_view dimension,
                             const FeatureSchema& schema) {
  if (schema.FindDimension(dimension) == nullptr) {
    throw Error(ErrorCode::kUnknownDimension,
                "unknown dimension '" + std::string(dimension) + "'");
  }
  if (auto f = TryIntrinsicFeature(entry, dimension)) return *f;
  throw Error(ErrorCode::kUnresolvedDimension,
              "entry '" + entry.id + "' does not determine dimension " +
                  std::string(dimension));
}

}  // namespace m2c
