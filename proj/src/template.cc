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

#include "m2c/template.h"

#include <algorithm>
#include <set>

#include "m2c/error.h"
#include "m2c/functions.h"
#include "m2c/json_util.h"
#include "m2c/lexicon.h"
#include "m2c/schema.h"

namespace m2c {
namespace {

[[noreturn]] void Fail(std::string_view body, const std::string& why) {
  throw Error(ErrorCode::kParse, "{" + std::string(body) + "}: " + why);
}

bool IsIdentifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!head(text[0])) return false;
  return std::all_of(text.begin(), text.end(), [&](char c) {
    return head(c) || (c >= '0' && c <= '9');
  });
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Splits a feature path on dots that are not inside <...> segments. A '<'
// only opens a segment at the start of a path component.
std::vector<std::string_view> SplitPath(std::string_view body) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '<' && i == start) {
      ++depth;
    } else if (c == '>' && depth > 0) {
      --depth;
    } else if (c == '.' && depth == 0) {
      parts.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) Fail(body, "unbalanced '<'");
  parts.push_back(body.substr(start));
  return parts;
}

// True when ':' or '|' occur outside <...> path segments.
bool HasTopLevelGuard(std::string_view body) {
  int depth = 0;
  bool at_component_start = true;
  for (char c : body) {
    if (c == '<' && at_component_start) {
      ++depth;
    } else if (c == '>' && depth > 0) {
      --depth;
    } else if ((c == ':' || c == '|') && depth == 0) {
      return true;
    }
    at_component_start = (c == '.' && depth == 0);
  }
  return false;
}

Guard ParseGuard(std::string_view body, std::string_view alt, bool literal) {
  std::size_t colon = alt.rfind(':');
  std::string_view out = alt.substr(0, colon);
  std::string_view test = alt.substr(colon + 1);
  std::size_t dot = test.rfind('.');
  if (dot == std::string_view::npos) {
    Fail(body, "guard '" + std::string(alt) + "' must be value:ref.FEATURE");
  }
  Guard guard{std::string(literal ? out : Trim(out)),
              std::string(Trim(test.substr(0, dot))),
              std::string(Trim(test.substr(dot + 1)))};
  if (!IsIdentifier(guard.ref)) {
    Fail(body, "guard reference '" + guard.ref + "' is not a placeholder name");
  }
  if (!IsUpperIdentifier(guard.feature)) {
    Fail(body, "guard feature '" + guard.feature + "' is not a feature name");
  }
  if (!literal && !IsUpperIdentifier(guard.output)) {
    Fail(body, "guard outcome '" + guard.output + "' is not a feature name");
  }
  return guard;
}

FeatureSpec ParseSegment(std::string_view body, std::string_view seg) {
  if (seg.empty()) Fail(body, "empty path segment");
  if (seg.front() == '<') {
    if (seg.size() < 2 || seg.back() != '>') {
      Fail(body, "malformed segment '" + std::string(seg) + "'");
    }
    std::string_view inner = seg.substr(1, seg.size() - 2);
    if (inner.find(':') != std::string_view::npos ||
        inner.find('|') != std::string_view::npos) {
      CondFeatureSpec cond;
      for (std::string_view alt : Split(inner, '|')) {
        alt = Trim(alt);
        if (alt.find(':') == std::string_view::npos) {
          if (cond.fallback) Fail(body, "more than one default outcome");
          if (!IsUpperIdentifier(alt)) {
            Fail(body, "default outcome '" + std::string(alt) +
                           "' is not a feature name");
          }
          cond.fallback = std::string(alt);
          continue;
        }
        cond.guards.push_back(ParseGuard(body, alt, /*literal=*/false));
      }
      if (cond.guards.empty()) Fail(body, "conditional feature has no guard");
      return cond;
    }
    auto parts = Split(inner, '.');
    if (parts.size() < 2) {
      Fail(body, "agreement segment '" + std::string(seg) +
                     "' needs a reference and at least one dimension");
    }
    CopySpec copy;
    copy.ref = std::string(Trim(parts[0]));
    if (!IsIdentifier(copy.ref)) {
      Fail(body, "agreement reference '" + copy.ref +
                     "' is not a placeholder name");
    }
    for (std::size_t i = 1; i < parts.size(); ++i) {
      std::string dim(Trim(parts[i]));
      if (!IsUpperIdentifier(dim)) {
        Fail(body, "'" + dim + "' is not a dimension name");
      }
      copy.dimensions.push_back(std::move(dim));
    }
    return copy;
  }
  if (seg == kCapitalize) return TransformSpec{std::string(seg)};
  if (IsUpperIdentifier(seg)) return StaticSpec{std::string(seg)};
  Fail(body, "unknown segment shape '" + std::string(seg) + "'");
}

std::vector<FeatureSpec> ParseSpecs(std::string_view body,
                                    std::span<const std::string_view> segs) {
  std::vector<FeatureSpec> specs;
  for (std::string_view seg : segs) specs.push_back(ParseSegment(body, seg));
  return specs;
}

FunctionNode ParseFunction(std::string_view body) {
  FunctionNode node;
  std::size_t open = body.find('(');
  std::size_t close = body.find(')');
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close < open) {
    Fail(body, "function call needs $name(arg, ...)");
  }
  node.function = std::string(body.substr(1, open - 1));
  if (!IsIdentifier(node.function)) {
    Fail(body, "bad function name '" + node.function + "'");
  }
  for (std::string_view arg :
       Split(body.substr(open + 1, close - open - 1), ',')) {
    arg = Trim(arg);
    if (!IsIdentifier(arg)) {
      Fail(body, "bad function argument '" + std::string(arg) + "'");
    }
    node.args.emplace_back(arg);
  }
  std::string_view rest = body.substr(close + 1);
  if (!rest.empty()) {
    if (rest.front() != '.') Fail(body, "unexpected text after function call");
    auto segs = SplitPath(rest.substr(1));
    node.specs = ParseSpecs(body, segs);
  }
  return node;
}

ConditionalLiteralNode ParseConditionalLiteral(std::string_view body) {
  ConditionalLiteralNode node;
  for (std::string_view alt : Split(body, '|')) {
    if (alt.find(':') == std::string_view::npos) {
      if (node.fallback) Fail(body, "more than one default value");
      node.fallback = std::string(alt);
      continue;
    }
    node.guards.push_back(ParseGuard(body, alt, /*literal=*/true));
  }
  if (node.guards.empty()) Fail(body, "conditional has no guard");
  return node;
}

Segment ParseNode(std::string_view body, std::size_t offset) {
  if (Trim(body).empty()) {
    throw Error(ErrorCode::kParse,
                "empty placeholder at offset " + std::to_string(offset));
  }
  std::string raw = "{" + std::string(body) + "}";
  if (body.front() == '$') {
    FunctionNode node = ParseFunction(body);
    node.offset = offset;
    node.raw = std::move(raw);
    return node;
  }
  if (HasTopLevelGuard(body)) {
    ConditionalLiteralNode node = ParseConditionalLiteral(body);
    node.offset = offset;
    node.raw = std::move(raw);
    return node;
  }
  FeaturePath path = ParseFeaturePath(body);
  PlaceholderNode node;
  node.name = std::move(path.name);
  node.base_type = std::move(path.base_type);
  node.index = path.index;
  node.explicit_index = path.explicit_index;
  node.specs = std::move(path.specs);
  node.offset = offset;
  node.raw = std::move(raw);
  return node;
}

// Spec-level references of a node: Copy refs, guard refs, function args.
std::vector<std::string> References(const Segment& segment) {
  std::vector<std::string> refs;
  auto from_specs = [&](const std::vector<FeatureSpec>& specs) {
    for (const FeatureSpec& spec : specs) {
      if (const auto* copy = std::get_if<CopySpec>(&spec)) {
        refs.push_back(copy->ref);
      } else if (const auto* cond = std::get_if<CondFeatureSpec>(&spec)) {
        for (const Guard& g : cond->guards) refs.push_back(g.ref);
      }
    }
  };
  if (const auto* p = std::get_if<PlaceholderNode>(&segment)) {
    from_specs(p->specs);
  } else if (const auto* c = std::get_if<ConditionalLiteralNode>(&segment)) {
    for (const Guard& g : c->guards) refs.push_back(g.ref);
  } else if (const auto* f = std::get_if<FunctionNode>(&segment)) {
    refs.insert(refs.end(), f->args.begin(), f->args.end());
    from_specs(f->specs);
  }
  return refs;
}

std::size_t NodeOffset(const Segment& segment) {
  return std::visit(
      [](const auto& node) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(node)>, Literal>) {
          return 0;
        } else {
          return node.offset;
        }
      },
      segment);
}

std::string_view NodeRaw(const Segment& segment) {
  return std::visit([](const auto& node) -> std::string_view { return node.raw; },
                    segment);
}

std::string Where(const std::string& set_id, const NodeLocation& loc) {
  return "template '" + set_id + "' " + loc.field + ":" +
         std::to_string(NodeOffset(*loc.segment)) + ": " +
         std::string(NodeRaw(*loc.segment));
}

const char* MatcherKey(MatcherKind kind) {
  switch (kind) {
    case MatcherKind::kGoldForm: return "gold_form";
    case MatcherKind::kAnyOf: return "any_of";
    case MatcherKind::kPattern: return "pattern";
    case MatcherKind::kNumeric: return "numeric";
  }
  return "any_of";
}

TemplateAst ParseField(const Json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_string()) {
    throw Error(ErrorCode::kTemplate,
                std::string("template set: missing string field '") + field +
                    "'");
  }
  try {
    return ParseTemplate(doc[field].get<std::string>());
  } catch (const Error& e) {
    throw Error(e.code(), std::string(field) + ": " + e.what());
  }
}

}  // namespace

FeaturePath SplitPlaceholderName(std::string_view name) {
  FeaturePath out;
  out.name = std::string(name);
  std::size_t digits = name.size();
  while (digits > 0 && name[digits - 1] >= '0' && name[digits - 1] <= '9') {
    --digits;
  }
  if (digits == name.size()) {
    out.base_type = out.name;
    return out;
  }
  if (digits == 0) {
    throw Error(ErrorCode::kParse, "placeholder name '" + out.name +
                                       "' has no base type");
  }
  std::string_view number = name.substr(digits);
  if (number.size() > 6 || number.front() == '0') {
    throw Error(ErrorCode::kParse,
                "placeholder '" + out.name + "' needs a positive index");
  }
  out.base_type = std::string(name.substr(0, digits));
  out.index = std::stoi(std::string(number));
  out.explicit_index = true;
  return out;
}

FeaturePath ParseFeaturePath(std::string_view body) {
  auto segs = SplitPath(body);
  std::string_view head = Trim(segs.front());
  if (!IsIdentifier(head)) {
    Fail(body, "'" + std::string(head) + "' is not a placeholder name");
  }
  FeaturePath path = SplitPlaceholderName(head);
  path.specs = ParseSpecs(
      body, std::span<const std::string_view>(segs).subspan(1));
  return path;
}

TemplateAst ParseTemplate(std::string_view text) {
  TemplateAst ast;
  Literal pending;
  auto flush = [&] {
    if (!pending.raw.empty()) ast.segments.push_back(std::move(pending));
    pending = Literal();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
      pending.raw += "{{";
      pending.text += '{';
      i += 2;
      continue;
    }
    if (c == '}') {
      if (i + 1 < text.size() && text[i + 1] == '}') {
        pending.raw += "}}";
        pending.text += '}';
        i += 2;
        continue;
      }
      throw Error(ErrorCode::kParse,
                  "unbalanced '}' at offset " + std::to_string(i));
    }
    if (c == '{') {
      std::size_t close = text.find('}', i + 1);
      std::size_t nested = text.find('{', i + 1);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::kParse,
                    "unbalanced '{' at offset " + std::to_string(i));
      }
      if (nested != std::string_view::npos && nested < close) {
        throw Error(ErrorCode::kParse,
                    "nested '{' at offset " + std::to_string(nested));
      }
      flush();
      ast.segments.push_back(
          ParseNode(text.substr(i + 1, close - i - 1), i));
      i = close + 1;
      continue;
    }
    pending.raw += c;
    pending.text += c;
    ++i;
  }
  flush();
  return ast;
}

std::string SerializeTemplate(const TemplateAst& ast) {
  std::string out;
  for (const Segment& segment : ast.segments) out += NodeRaw(segment);
  return out;
}

std::vector<NodeLocation> AllNodes(const TemplateSet& set) {
  std::vector<NodeLocation> nodes;
  auto add = [&](const std::string& field, const TemplateAst& ast) {
    for (const Segment& segment : ast.segments) {
      if (!std::holds_alternative<Literal>(segment)) {
        nodes.push_back(NodeLocation{field, &segment});
      }
    }
  };
  add("context", set.context);
  add("question", set.question);
  add("answer", set.answer);
  for (std::size_t m = 0; m < set.answer_spec.matchers.size(); ++m) {
    for (const TemplateAst& ast : set.answer_spec.matchers[m].templates) {
      add("answer_spec[" + std::to_string(m) + "]", ast);
    }
  }
  return nodes;
}

std::vector<std::string> PlaceholderNames(const TemplateSet& set) {
  std::vector<std::string> names;
  for (const TemplateAst* ast : {&set.context, &set.question, &set.answer}) {
    for (const Segment& segment : ast->segments) {
      if (const auto* p = std::get_if<PlaceholderNode>(&segment)) {
        if (std::find(names.begin(), names.end(), p->name) == names.end()) {
          names.push_back(p->name);
        }
      }
    }
  }
  return names;
}

TemplateSet ParseTemplateSet(std::string_view document) {
  Json doc = ParseJsonStrict(document, "template set");
  if (!doc.is_object()) {
    throw Error(ErrorCode::kTemplate, "template set: expected an object");
  }
  for (const auto& [key, _] : doc.items()) {
    static const std::set<std::string> kKnown = {
        "id", "language", "context", "question", "answer", "answer_spec",
        "configs", "description"};
    if (kKnown.count(key) == 0) {
      throw Error(ErrorCode::kTemplate,
                  "template set: unexpected field '" + key + "'");
    }
  }
  TemplateSet set;
  for (const char* field : {"id", "language"}) {
    if (!doc.contains(field) || !doc[field].is_string() ||
        doc[field].get<std::string>().empty()) {
      throw Error(ErrorCode::kTemplate,
                  std::string("template set: missing string field '") + field +
                      "'");
    }
  }
  set.id = doc["id"].get<std::string>();
  set.language = doc["language"].get<std::string>();
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) {
      throw Error(ErrorCode::kTemplate, "description must be a string");
    }
    set.description = doc["description"].get<std::string>();
  }
  set.context = ParseField(doc, "context");
  set.question = ParseField(doc, "question");
  set.answer = ParseField(doc, "answer");

  if (doc.contains("answer_spec")) {
    const Json& spec = doc["answer_spec"];
    if (!spec.is_array() || spec.empty()) {
      throw Error(ErrorCode::kTemplate,
                  "answer_spec must be a non-empty list of matchers");
    }
    for (const Json& item : spec) {
      MatcherSpec matcher;
      const char* found = nullptr;
      for (MatcherKind kind :
           {MatcherKind::kGoldForm, MatcherKind::kAnyOf, MatcherKind::kPattern,
            MatcherKind::kNumeric}) {
        if (item.is_object() && item.contains(MatcherKey(kind))) {
          if (found != nullptr) {
            throw Error(ErrorCode::kTemplate,
                        "answer_spec: matcher has several kinds");
          }
          found = MatcherKey(kind);
          matcher.kind = kind;
        }
      }
      if (found == nullptr) {
        throw Error(ErrorCode::kTemplate,
                    "answer_spec: matcher needs one of gold_form, any_of, "
                    "pattern, numeric");
      }
      const Json& value = item[found];
      if (matcher.kind == MatcherKind::kAnyOf && value.is_array()) {
        for (const Json& v : value) {
          if (!v.is_string()) {
            throw Error(ErrorCode::kTemplate, "any_of values must be strings");
          }
          matcher.sources.push_back(v.get<std::string>());
        }
      } else if (value.is_string()) {
        matcher.sources.push_back(value.get<std::string>());
      } else {
        throw Error(ErrorCode::kTemplate,
                    std::string("answer_spec: '") + found +
                        "' must be a string");
      }
      if (matcher.sources.empty()) {
        throw Error(ErrorCode::kTemplate, "any_of needs at least one value");
      }
      if (item.contains("focus")) {
        if (matcher.kind != MatcherKind::kGoldForm ||
            !item["focus"].is_string()) {
          throw Error(ErrorCode::kTemplate,
                      "answer_spec: 'focus' applies to gold_form only");
        }
        matcher.focus = item["focus"].get<std::string>();
      }
      for (const std::string& source : matcher.sources) {
        try {
          matcher.templates.push_back(ParseTemplate(source));
        } catch (const Error& e) {
          throw Error(e.code(), std::string("answer_spec ") + found + ": " +
                                    e.what());
        }
      }
      set.answer_spec.matchers.push_back(std::move(matcher));
    }
  } else {
    MatcherSpec exact;
    exact.kind = MatcherKind::kAnyOf;
    exact.sources.push_back(SerializeTemplate(set.answer));
    exact.templates.push_back(set.answer);
    set.answer_spec.matchers.push_back(std::move(exact));
  }

  if (doc.contains("configs")) {
    const Json& configs = doc["configs"];
    if (!configs.is_object()) {
      throw Error(ErrorCode::kTemplate, "configs must be an object");
    }
    for (const auto& [type, value] : configs.items()) {
      PlaceholderConfig config;
      if (!value.is_object()) {
        throw Error(ErrorCode::kTemplate,
                    "config for '" + type + "' must be an object");
      }
      for (const auto& [key, flag] : value.items()) {
        if (!flag.is_boolean() || (key != "repetition" && key != "order")) {
          throw Error(ErrorCode::kTemplate,
                      "config for '" + type +
                          "' accepts boolean repetition/order only");
        }
        (key == "repetition" ? config.repetition : config.order) =
            flag.get<bool>();
      }
      set.configs[type] = config;
    }
  }

  // Cross references.
  std::vector<std::string> names = PlaceholderNames(set);
  std::set<std::string> known(names.begin(), names.end());
  std::map<std::string, std::pair<bool, bool>> index_styles;
  for (const TemplateAst* ast : {&set.context, &set.question, &set.answer}) {
    for (const Segment& segment : ast->segments) {
      if (const auto* p = std::get_if<PlaceholderNode>(&segment)) {
        auto& styles = index_styles[p->base_type];
        (p->explicit_index ? styles.second : styles.first) = true;
      }
    }
  }
  for (const auto& [base, styles] : index_styles) {
    if (styles.first && styles.second) {
      throw Error(ErrorCode::kTemplate,
                  "template '" + set.id + "': placeholder type '" + base +
                      "' is used both with and without an index");
    }
  }
  for (const NodeLocation& loc : AllNodes(set)) {
    for (const std::string& ref : References(*loc.segment)) {
      if (known.count(ref) == 0) {
        throw Error(ErrorCode::kDanglingReference,
                    Where(set.id, loc) + ": '" + ref +
                        "' does not occur in context, question or answer");
      }
    }
    if (loc.field.rfind("answer_spec", 0) == 0) {
      if (const auto* p = std::get_if<PlaceholderNode>(loc.segment)) {
        if (known.count(p->name) == 0) {
          throw Error(ErrorCode::kDanglingReference,
                      Where(set.id, loc) +
                          ": matcher placeholder does not occur in context, "
                          "question or answer");
        }
      }
    }
  }
  for (const auto& [type, _] : set.configs) {
    if (index_styles.count(type) == 0) {
      throw Error(ErrorCode::kTemplate, "template '" + set.id +
                                            "': config for unused type '" +
                                            type + "'");
    }
  }
  for (std::size_t m = 0; m < set.answer_spec.matchers.size(); ++m) {
    const MatcherSpec& matcher = set.answer_spec.matchers[m];
    if (matcher.kind != MatcherKind::kGoldForm &&
        matcher.kind != MatcherKind::kNumeric) {
      continue;
    }
    int nodes = 0;
    bool focus_found = matcher.focus.empty();
    for (const Segment& segment : matcher.templates.front().segments) {
      if (const auto* p = std::get_if<PlaceholderNode>(&segment)) {
        ++nodes;
        if (p->name == matcher.focus) focus_found = true;
      } else if (std::holds_alternative<FunctionNode>(segment)) {
        ++nodes;
      }
    }
    if (nodes == 0 || !focus_found) {
      throw Error(ErrorCode::kTemplate,
                  "template '" + set.id + "': answer_spec[" +
                      std::to_string(m) + "] needs a placeholder to judge");
    }
  }
  return set;
}

std::string SerializeTemplateSet(const TemplateSet& set) {
  Json doc = Json::object();
  doc["id"] = set.id;
  doc["language"] = set.language;
  if (!set.description.empty()) doc["description"] = set.description;
  doc["context"] = SerializeTemplate(set.context);
  doc["question"] = SerializeTemplate(set.question);
  doc["answer"] = SerializeTemplate(set.answer);
  Json spec = Json::array();
  for (const MatcherSpec& matcher : set.answer_spec.matchers) {
    Json item = Json::object();
    if (matcher.kind == MatcherKind::kAnyOf) {
      item["any_of"] = matcher.sources;
    } else {
      item[MatcherKey(matcher.kind)] = matcher.sources.front();
    }
    if (!matcher.focus.empty()) item["focus"] = matcher.focus;
    spec.push_back(std::move(item));
  }
  doc["answer_spec"] = std::move(spec);
  if (!set.configs.empty()) {
    Json configs = Json::object();
    for (const auto& [type, config] : set.configs) {
      configs[type] = Json{{"repetition", config.repetition},
                           {"order", config.order}};
    }
    doc["configs"] = std::move(configs);
  }
  return doc.dump(2);
}

std::vector<std::string> DependencyOrder(const TemplateSet& set) {
  std::vector<std::string> names = PlaceholderNames(set);
  std::map<std::string, std::set<std::string>> prerequisites;
  for (const std::string& name : names) prerequisites[name];
  for (const TemplateAst* ast : {&set.context, &set.question, &set.answer}) {
    for (const Segment& segment : ast->segments) {
      const auto* p = std::get_if<PlaceholderNode>(&segment);
      if (p == nullptr) continue;
      for (const std::string& ref : References(segment)) {
        prerequisites[p->name].insert(ref);
      }
    }
  }
  std::vector<std::string> order;
  std::set<std::string> placed;
  while (order.size() < names.size()) {
    bool progressed = false;
    for (const std::string& name : names) {
      if (placed.count(name)) continue;
      const auto& pre = prerequisites[name];
      if (std::all_of(pre.begin(), pre.end(), [&](const std::string& r) {
            return placed.count(r) != 0;
          })) {
        order.push_back(name);
        placed.insert(name);
        progressed = true;
        break;
      }
    }
    if (!progressed) {
      std::string cycle;
      for (const std::string& name : names) {
        if (placed.count(name) == 0) cycle += (cycle.empty() ? "" : ", ") + name;
      }
      throw Error(ErrorCode::kCyclicDependence,
                  "template '" + set.id + "': cyclic agreement among " + cycle);
    }
  }
  return order;
}

void ValidateTemplateSet(const TemplateSet& set, const FeatureSchema& schema,
                         const Lexicon& lexicon) {
  auto feature = [&](const NodeLocation& loc, const std::string& name) {
    if (!schema.HasFeature(name)) {
      throw Error(ErrorCode::kUnknownFeature,
                  Where(set.id, loc) + ": unknown feature '" + name + "'");
    }
  };
  auto specs = [&](const NodeLocation& loc,
                   const std::vector<FeatureSpec>& list) {
    for (const FeatureSpec& spec : list) {
      if (const auto* s = std::get_if<StaticSpec>(&spec)) {
        feature(loc, s->feature);
      } else if (const auto* copy = std::get_if<CopySpec>(&spec)) {
        for (const std::string& dim : copy->dimensions) {
          if (schema.FindDimension(dim) == nullptr) {
            throw Error(ErrorCode::kUnknownDimension,
                        Where(set.id, loc) + ": unknown dimension '" + dim +
                            "'");
          }
        }
      } else if (const auto* cond = std::get_if<CondFeatureSpec>(&spec)) {
        for (const Guard& g : cond->guards) {
          feature(loc, g.output);
          feature(loc, g.feature);
        }
        if (cond->fallback) feature(loc, *cond->fallback);
      }
    }
  };
  for (const NodeLocation& loc : AllNodes(set)) {
    if (const auto* p = std::get_if<PlaceholderNode>(loc.segment)) {
      if (lexicon.FindType(p->base_type) == nullptr) {
        throw Error(ErrorCode::kValidation,
                    Where(set.id, loc) + ": lexicon has no type '" +
                        p->base_type + "'");
      }
      specs(loc, p->specs);
    } else if (const auto* c =
                   std::get_if<ConditionalLiteralNode>(loc.segment)) {
      for (const Guard& g : c->guards) feature(loc, g.feature);
    } else if (const auto* f = std::get_if<FunctionNode>(loc.segment)) {
      const NumericFunction* fn = FindFunction(f->function);
      if (fn == nullptr) {
        throw Error(ErrorCode::kUnknownFunction,
                    Where(set.id, loc) + ": unknown function '$" +
                        f->function + "'");
      }
      if (fn->arity != f->args.size()) {
        throw Error(ErrorCode::kValidation,
                    Where(set.id, loc) + ": $" + f->function + " takes " +
                        std::to_string(fn->arity) + " arguments");
      }
      specs(loc, f->specs);
    }
  }
}

}  // namespace m2c
