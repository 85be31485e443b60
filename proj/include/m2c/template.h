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

// The template DSL: placeholders with morphological feature paths,
// agreement copies, inline conditionals and functions.
//
//   {name}                       plain placeholder
//   {job2.SG.TO_CAPITALIZE}      static features and a transform
//   {adj.<name.GENDER.NUMBER>}   copy GENDER and NUMBER from `name`
//   {fruit1.<ACC:n.SG|NOM>}      ACC when `n` is SG, NOM otherwise
//   {is:name.SG|are:name.PL}     inline conditional literal
//   {$diff(n1,n2).<f.GENDER>}    function whose result is re-rendered
//   {{ and }}                    literal braces

#ifndef M2C_TEMPLATE_H_
#define M2C_TEMPLATE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace m2c {

class FeatureSchema;
class Lexicon;

struct StaticSpec {
  std::string feature;
  friend bool operator==(const StaticSpec&, const StaticSpec&) = default;
};

struct CopySpec {
  std::string ref;
  std::vector<std::string> dimensions;
  friend bool operator==(const CopySpec&, const CopySpec&) = default;
};

// `output` fires when placeholder `ref` carries `feature`.
struct Guard {
  std::string output;
  std::string ref;
  std::string feature;
  friend bool operator==(const Guard&, const Guard&) = default;
};

struct CondFeatureSpec {
  std::vector<Guard> guards;
  std::optional<std::string> fallback;
  friend bool operator==(const CondFeatureSpec&,
                         const CondFeatureSpec&) = default;
};

struct TransformSpec {
  std::string name;
  friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

using FeatureSpec =
    std::variant<StaticSpec, CopySpec, CondFeatureSpec, TransformSpec>;

struct Literal {
  std::string raw;   // as written, escapes included
  std::string text;  // escapes decoded
};

struct PlaceholderNode {
  std::string name;       // e.g. "name2"
  std::string base_type;  // e.g. "name"
  int index = 1;
  bool explicit_index = false;
  std::vector<FeatureSpec> specs;
  std::size_t offset = 0;
  std::string raw;
};

struct ConditionalLiteralNode {
  std::vector<Guard> guards;
  std::optional<std::string> fallback;
  std::size_t offset = 0;
  std::string raw;
};

struct FunctionNode {
  std::string function;  // without the leading '$'
  std::vector<std::string> args;
  std::vector<FeatureSpec> specs;
  std::size_t offset = 0;
  std::string raw;
};

using Segment = std::variant<Literal, PlaceholderNode, ConditionalLiteralNode,
                             FunctionNode>;

struct TemplateAst {
  std::vector<Segment> segments;
};

struct FeaturePath {
  std::string name;
  std::string base_type;
  int index = 1;
  bool explicit_index = false;
  std::vector<FeatureSpec> specs;
};

// Throws Error(kParse).
TemplateAst ParseTemplate(std::string_view text);
FeaturePath ParseFeaturePath(std::string_view body);

// Reproduces the parsed source byte for byte.
std::string SerializeTemplate(const TemplateAst& ast);

struct PlaceholderConfig {
  bool repetition = true;
  bool order = true;
  friend bool operator==(const PlaceholderConfig&,
                         const PlaceholderConfig&) = default;
};

enum class MatcherKind { kGoldForm, kAnyOf, kPattern, kNumeric };

// An answer matcher before materialization; its strings are templates
// rendered against each binding.
struct MatcherSpec {
  MatcherKind kind = MatcherKind::kAnyOf;
  std::vector<std::string> sources;
  std::vector<TemplateAst> templates;
  // kGoldForm: the placeholder whose inflection is judged; empty means the
  // first placeholder or function node of the template.
  std::string focus;
};

struct AnswerSpec {
  std::vector<MatcherSpec> matchers;
};

struct TemplateSet {
  std::string id;
  std::string language;
  std::string description;
  TemplateAst context;
  TemplateAst question;
  TemplateAst answer;
  AnswerSpec answer_spec;
  std::map<std::string, PlaceholderConfig> configs;
};

// Parses the JSON template-set document and checks cross references.
TemplateSet ParseTemplateSet(std::string_view document);
std::string SerializeTemplateSet(const TemplateSet& set);

// Distinct placeholder names of context, question and answer in document
// order.
std::vector<std::string> PlaceholderNames(const TemplateSet& set);

// Topological order of the agreement relation; independents keep document
// order. Throws Error(kCyclicDependence).
std::vector<std::string> DependencyOrder(const TemplateSet& set);

// Checks every feature, dimension, function and base type against the
// schema and lexicon. Throws Error with a message naming the field, byte
// offset and offending placeholder source.
void ValidateTemplateSet(const TemplateSet& set, const FeatureSchema& schema,
                         const Lexicon& lexicon);

// Visits every non-literal segment of the set, including answer matchers.
struct NodeLocation {
  std::string field;  // "context", "question", "answer", "answer_spec[i]"
  const Segment* segment = nullptr;
};
std::vector<NodeLocation> AllNodes(const TemplateSet& set);

// Splits "name2" into ("name", 2, true); "name" is ("name", 1, false).
FeaturePath SplitPlaceholderName(std::string_view name);

}  // namespace m2c

#endif  // M2C_TEMPLATE_H_
