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

#include "m2c/expander.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "m2c/error.h"
#include "m2c/functions.h"
#include "m2c/unicode.h"

namespace m2c {
namespace {

struct NodeOutput {
  std::string text;
  const LexiconType* type = nullptr;
  const LexiconEntry* entry = nullptr;
  FeatureSet required;
  FeatureSet key;
  std::string surface;
  bool capitalize = false;
  std::optional<std::int64_t> numeric;
};

std::string ApplyTransforms(const FeatureSet& required, std::string surface) {
  if (required.Contains(kCapitalize)) {
    return unicode::CapitalizeFirst(surface);
  }
  return surface;
}

class Renderer {
 public:
  Renderer(const TemplateSet& set, const Binding& binding,
           const Lexicon& lexicon, const FeatureSchema& schema)
      : set_(set), binding_(binding), lexicon_(lexicon), schema_(schema) {}

  std::string RenderAst(const TemplateAst& ast, const std::string& field,
                        bool regex_escape = false) {
    std::string out;
    for (const Segment& segment : ast.segments) {
      out += RenderSegment(segment, field, regex_escape);
    }
    return out;
  }

  std::string RenderSegment(const Segment& segment, const std::string& field,
                            bool regex_escape) {
    if (const auto* literal = std::get_if<Literal>(&segment)) {
      return literal->text;
    }
    std::string text;
    Guarded(segment, field, [&] {
      if (const auto* p = std::get_if<PlaceholderNode>(&segment)) {
        text = RenderPlaceholder(*p, field).text;
      } else if (const auto* f = std::get_if<FunctionNode>(&segment)) {
        text = RenderFunction(*f, field).text;
      } else {
        text = RenderConditional(std::get<ConditionalLiteralNode>(segment));
      }
    });
    return regex_escape ? unicode::RegexEscape(text) : text;
  }

  // Runs `body`, attaching the template id and node source to any error.
  template <typename Body>
  void Guarded(const Segment& segment, const std::string& field, Body body) {
    try {
      body();
    } catch (const Error& e) {
      std::string raw = std::visit(
          [](const auto& node) -> std::string { return node.raw; }, segment);
      throw Error(e.code(), "template '" + set_.id + "' " + field + ": " +
                                raw + ": " + e.what());
    }
  }

  NodeOutput RenderPlaceholder(const PlaceholderNode& node,
                               const std::string& field) {
    NodeOutput out;
    out.entry = &EntryFor(node.name, &out.type);
    FeatureSet full = Required(node.specs);
    out.required = full.WithoutDimension(kTransformDimension);
    const Form& form = SelectForm(*out.entry, out.required);
    out.key = form.first;
    out.surface = form.second;
    out.capitalize = full.Contains(kCapitalize);
    out.text = ApplyTransforms(full, form.second);
    out.numeric = out.entry->numeric;
    Record(field, node.name, out, node.specs);
    return out;
  }

  NodeOutput RenderFunction(const FunctionNode& node,
                            const std::string& field) {
    const NumericFunction* fn = FindFunction(node.function);
    if (fn == nullptr) {
      throw Error(ErrorCode::kUnknownFunction,
                  "unknown function '$" + node.function + "'");
    }
    if (fn->arity != node.args.size()) {
      throw Error(ErrorCode::kUnknownFunction,
                  "$" + node.function + " takes " + std::to_string(fn->arity) +
                      " arguments");
    }
    std::vector<std::int64_t> values;
    const LexiconType* result_type = nullptr;
    for (const std::string& arg : node.args) {
      const LexiconType* type = nullptr;
      const LexiconEntry& entry = EntryFor(arg, &type);
      if (result_type == nullptr) result_type = type;
      if (!entry.numeric) {
        throw Error(ErrorCode::kMissingNumeric,
                    "argument " + arg + " ('" + entry.id +
                        "') has no numeric value");
      }
      values.push_back(*entry.numeric);
    }
    std::optional<std::int64_t> result = fn->apply(values);
    const LexiconEntry* found = nullptr;
    if (result) {
      for (const LexiconEntry& entry : result_type->entries) {
        if (entry.numeric != result) continue;
        if (found != nullptr) {
          throw Error(ErrorCode::kAmbiguousInflection,
                      "several '" + result_type->name +
                          "' entries have numeric value " +
                          std::to_string(*result));
        }
        found = &entry;
      }
    }
    if (found == nullptr) {
      throw Error(ErrorCode::kResultNotInLexicon,
                  "$" + node.function + " = " +
                      (result ? std::to_string(*result) : "undefined") +
                      " has no entry in type '" + result_type->name + "'");
    }
    NodeOutput out;
    out.type = result_type;
    out.entry = found;
    out.numeric = result;
    FeatureSet full = Required(node.specs);
    out.required = full.WithoutDimension(kTransformDimension);
    const Form& form = SelectForm(*found, out.required);
    out.key = form.first;
    out.surface = form.second;
    out.capitalize = full.Contains(kCapitalize);
    out.text = ApplyTransforms(full, form.second);
    Record(field, "$" + node.function, out, node.specs);
    return out;
  }

  std::string RenderConditional(const ConditionalLiteralNode& node) {
    for (const Guard& guard : node.guards) {
      std::string_view dim = schema_.DimensionOf(guard.feature);
      if (FeatureOf(guard.ref, dim) == guard.feature) return guard.output;
    }
    if (node.fallback) return *node.fallback;
    throw Error(ErrorCode::kNoGuardFired, "no guard fired");
  }

  // The feature `placeholder` carries for `dimension`: intrinsic first,
  // then the key realized by its first occurrence.
  std::string FeatureOf(const std::string& placeholder,
                        std::string_view dimension) {
    const LexiconEntry& entry = EntryFor(placeholder);
    if (auto f = TryIntrinsicFeature(entry, dimension)) return *f;
    auto it = realized_.find(placeholder);
    if (it == realized_.end()) {
      if (!in_progress_.insert(placeholder).second) {
        throw Error(ErrorCode::kCyclicDependence,
                    "agreement cycle through '" + placeholder + "'");
      }
      const PlaceholderNode* node = FirstOccurrence(placeholder);
      FeatureSet required =
          Required(node->specs).WithoutDimension(kTransformDimension);
      FeatureSet key = SelectForm(entry, required).first;
      in_progress_.erase(placeholder);
      it = realized_.emplace(placeholder, std::move(key)).first;
    }
    if (auto f = it->second.FeatureFor(dimension)) return std::string(*f);
    throw Error(ErrorCode::kUnresolvedDimension,
                "'" + placeholder + "' ('" + entry.id +
                    "') does not determine dimension " +
                    std::string(dimension));
  }

  const LexiconEntry& EntryFor(const std::string& placeholder,
                               const LexiconType** type_out = nullptr) {
    const Assignment* a = binding_.Find(placeholder);
    if (a == nullptr) {
      throw Error(ErrorCode::kGeneration,
                  "binding does not assign '" + placeholder + "'");
    }
    const LexiconType* type = lexicon_.FindType(a->type);
    if (type == nullptr || a->entry >= type->entries.size()) {
      throw Error(ErrorCode::kGeneration,
                  "binding of '" + placeholder + "' is out of range");
    }
    if (type_out != nullptr) *type_out = type;
    return type->entries[a->entry];
  }

  std::vector<RenderTraceItem> trace;

 private:
  FeatureSet Required(const std::vector<FeatureSpec>& specs) {
    std::vector<std::string> names;
    for (const FeatureSpec& spec : specs) {
      if (const auto* s = std::get_if<StaticSpec>(&spec)) {
        names.push_back(s->feature);
      } else if (const auto* t = std::get_if<TransformSpec>(&spec)) {
        names.push_back(t->name);
      } else if (const auto* copy = std::get_if<CopySpec>(&spec)) {
        for (const std::string& dim : copy->dimensions) {
          names.push_back(FeatureOf(copy->ref, dim));
        }
      } else {
        const auto& cond = std::get<CondFeatureSpec>(spec);
        std::optional<std::string> outcome;
        for (const Guard& guard : cond.guards) {
          std::string_view dim = schema_.DimensionOf(guard.feature);
          if (FeatureOf(guard.ref, dim) == guard.feature) {
            outcome = guard.output;
            break;
          }
        }
        if (!outcome) outcome = cond.fallback;
        if (!outcome) {
          throw Error(ErrorCode::kNoGuardFired,
                      "no conditional feature guard fired");
        }
        names.push_back(*outcome);
      }
    }
    return schema_.MakeFeatureSet(names);
  }

  const PlaceholderNode* FirstOccurrence(const std::string& name) const {
    for (const TemplateAst* ast :
         {&set_.context, &set_.question, &set_.answer}) {
      for (const Segment& segment : ast->segments) {
        const auto* p = std::get_if<PlaceholderNode>(&segment);
        if (p != nullptr && p->name == name) return p;
      }
    }
    throw Error(ErrorCode::kDanglingReference,
                "'" + name + "' does not occur in the template");
  }

  void Record(const std::string& field, const std::string& node,
              const NodeOutput& out, const std::vector<FeatureSpec>& specs) {
    RenderTraceItem item;
    item.field = field;
    item.node = node;
    item.type = out.type->name;
    item.entry = out.entry->id;
    item.required = out.required;
    item.key = out.key;
    item.surface = out.surface;
    for (const FeatureSpec& spec : specs) {
      if (const auto* copy = std::get_if<CopySpec>(&spec)) {
        item.copies.push_back(*copy);
      }
    }
    trace.push_back(std::move(item));
  }

  const TemplateSet& set_;
  const Binding& binding_;
  const Lexicon& lexicon_;
  const FeatureSchema& schema_;
  std::map<std::string, FeatureSet> realized_;
  std::set<std::string> in_progress_;
};

std::size_t FocusIndex(const TemplateAst& ast, const std::string& focus) {
  for (std::size_t i = 0; i < ast.segments.size(); ++i) {
    const Segment& segment = ast.segments[i];
    if (const auto* p = std::get_if<PlaceholderNode>(&segment)) {
      if (focus.empty() || p->name == focus) return i;
    } else if (std::holds_alternative<FunctionNode>(segment) &&
               focus.empty()) {
      return i;
    }
  }
  throw Error(ErrorCode::kTemplate, "matcher has no placeholder to judge");
}

Matcher Materialize(Renderer& renderer, const MatcherSpec& spec,
                    const std::string& field) {
  Matcher matcher;
  matcher.kind = spec.kind;
  switch (spec.kind) {
    case MatcherKind::kAnyOf:
      for (const TemplateAst& ast : spec.templates) {
        matcher.values.push_back(renderer.RenderAst(ast, field));
      }
      break;
    case MatcherKind::kPattern:
      matcher.values.push_back(
          renderer.RenderAst(spec.templates.front(), field, true));
      CheckPattern(matcher.values.front());
      break;
    case MatcherKind::kGoldForm:
    case MatcherKind::kNumeric: {
      const TemplateAst& ast = spec.templates.front();
      std::size_t focus = FocusIndex(ast, spec.focus);
      std::string prefix;
      std::string suffix;
      for (std::size_t i = 0; i < focus; ++i) {
        prefix += renderer.RenderSegment(ast.segments[i], field, false);
      }
      NodeOutput out;
      const Segment& segment = ast.segments[focus];
      renderer.Guarded(segment, field, [&] {
        if (const auto* p = std::get_if<PlaceholderNode>(&segment)) {
          out = renderer.RenderPlaceholder(*p, field);
        } else {
          out = renderer.RenderFunction(std::get<FunctionNode>(segment),
                                        field);
        }
      });
      for (std::size_t i = focus + 1; i < ast.segments.size(); ++i) {
        suffix += renderer.RenderSegment(ast.segments[i], field, false);
      }
      if (spec.kind == MatcherKind::kGoldForm) {
        matcher.values.push_back(prefix + out.text + suffix);
        matcher.type = out.type->name;
        matcher.entry = out.entry->id;
        matcher.features = out.key.ToString();
        for (const Form& form : Variants(*out.entry)) {
          if (form.first == out.key) continue;
          std::string text = out.capitalize
                                 ? unicode::CapitalizeFirst(form.second)
                                 : form.second;
          matcher.variants.push_back(
              FormVariant{form.first.ToString(), prefix + text + suffix});
        }
      } else {
        renderer.Guarded(segment, field, [&] {
          if (!out.numeric) {
            throw Error(ErrorCode::kMissingNumeric,
                        "'" + out.entry->id + "' has no numeric value");
          }
        });
        matcher.numeric = *out.numeric;
        for (const LexiconEntry& entry : out.type->entries) {
          if (entry.numeric != out.numeric) continue;
          for (const Form& form : entry.forms) {
            if (std::find(matcher.values.begin(), matcher.values.end(),
                          form.second) == matcher.values.end()) {
              matcher.values.push_back(form.second);
            }
          }
        }
      }
      break;
    }
  }
  return matcher;
}

// Valid index tuples for one placeholder type, row-major.
std::vector<std::vector<std::size_t>> TypeTuples(std::size_t slots,
                                                 std::size_t entries,
                                                 PlaceholderConfig config) {
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> current;
  auto recurse = [&](auto&& self) -> void {
    if (current.size() == slots) {
      tuples.push_back(current);
      return;
    }
    for (std::size_t e = 0; e < entries; ++e) {
      if (!config.repetition &&
          std::find(current.begin(), current.end(), e) != current.end()) {
        continue;
      }
      if (!config.order && !current.empty() && e < current.back()) continue;
      current.push_back(e);
      self(self);
      current.pop_back();
    }
  };
  recurse(recurse);
  return tuples;
}

}  // namespace

const Assignment* Binding::Find(std::string_view placeholder) const {
  for (const Assignment& a : assignments) {
    if (a.placeholder == placeholder) return &a;
  }
  return nullptr;
}

std::vector<Assignment> BindingSlots(const TemplateSet& set) {
  std::vector<std::string> types;
  std::map<std::string, std::vector<std::pair<int, std::string>>> by_type;
  for (const std::string& name : PlaceholderNames(set)) {
    FeaturePath path = SplitPlaceholderName(name);
    if (by_type.count(path.base_type) == 0) types.push_back(path.base_type);
    by_type[path.base_type].emplace_back(path.index, name);
  }
  std::vector<Assignment> slots;
  for (const std::string& type : types) {
    auto& names = by_type[type];
    std::sort(names.begin(), names.end());
    for (const auto& [_, name] : names) {
      slots.push_back(Assignment{name, type, 0});
    }
  }
  return slots;
}

std::vector<Binding> EnumerateBindings(const TemplateSet& set,
                                       const Lexicon& lexicon) {
  std::vector<Assignment> slots = BindingSlots(set);
  // Group consecutive slots of one type.
  struct Group {
    std::size_t first = 0;
    std::size_t count = 0;
    std::vector<std::vector<std::size_t>> tuples;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (groups.empty() || slots[groups.back().first].type != slots[i].type) {
      groups.push_back(Group{i, 0, {}});
    }
    ++groups.back().count;
  }
  for (Group& group : groups) {
    const std::string& type = slots[group.first].type;
    const LexiconType* entries = lexicon.FindType(type);
    if (entries == nullptr) {
      throw Error(ErrorCode::kValidation, "template '" + set.id +
                                              "': lexicon has no type '" +
                                              type + "'");
    }
    if (entries->entries.empty()) {
      throw Error(ErrorCode::kValidation,
                  "lexicon type '" + type + "' has no values");
    }
    PlaceholderConfig config;
    if (auto it = set.configs.find(type); it != set.configs.end()) {
      config = it->second;
    }
    group.tuples = TypeTuples(group.count, entries->entries.size(), config);
    if (group.tuples.empty()) return {};
  }
  std::vector<Binding> bindings;
  std::vector<std::size_t> odometer(groups.size(), 0);
  while (true) {
    Binding binding;
    binding.assignments = slots;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& tuple = groups[g].tuples[odometer[g]];
      for (std::size_t k = 0; k < groups[g].count; ++k) {
        binding.assignments[groups[g].first + k].entry = tuple[k];
      }
    }
    bindings.push_back(std::move(binding));
    std::size_t g = groups.size();
    while (g > 0) {
      --g;
      if (++odometer[g] < groups[g].tuples.size()) break;
      odometer[g] = 0;
      if (g == 0) return bindings;
    }
    if (groups.empty()) return bindings;
  }
}

Rendered RenderWithTrace(const TemplateSet& set, const Binding& binding,
                         const Lexicon& lexicon, const FeatureSchema& schema) {
  Renderer renderer(set, binding, lexicon, schema);
  Rendered out;
  TestCase& tc = out.test_case;
  tc.template_id = set.id;
  tc.language = set.language;
  tc.context = renderer.RenderAst(set.context, "context");
  tc.question = renderer.RenderAst(set.question, "question");
  tc.gold_answer = renderer.RenderAst(set.answer, "answer");
  for (std::size_t m = 0; m < set.answer_spec.matchers.size(); ++m) {
    tc.matchers.push_back(Materialize(renderer, set.answer_spec.matchers[m],
                                      "answer_spec[" + std::to_string(m) +
                                          "]"));
  }
  for (const Assignment& a : binding.assignments) {
    const LexiconType* type = lexicon.FindType(a.type);
    tc.bindings.emplace_back(a.placeholder, type->entries[a.entry].id);
  }
  out.trace = std::move(renderer.trace);
  return out;
}

TestCase Render(const TemplateSet& set, const Binding& binding,
                const Lexicon& lexicon, const FeatureSchema& schema) {
  return RenderWithTrace(set, binding, lexicon, schema).test_case;
}

std::string ResolvePlaceholder(const TemplateSet& set,
                               const PlaceholderNode& node,
                               const Binding& binding, const Lexicon& lexicon,
                               const FeatureSchema& schema) {
  Renderer renderer(set, binding, lexicon, schema);
  return renderer.RenderPlaceholder(node, "placeholder").text;
}

std::string ApplyFunction(const TemplateSet& set, const FunctionNode& node,
                          const Binding& binding, const Lexicon& lexicon,
                          const FeatureSchema& schema) {
  Renderer renderer(set, binding, lexicon, schema);
  return renderer.RenderFunction(node, "function").text;
}

std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) {
    throw Error(ErrorCode::kGeneration, "empty sampling range");
  }
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

SuiteResult GenerateSuite(const TemplateSet& set, const Lexicon& lexicon,
                          const FeatureSchema& schema, std::size_t n,
                          std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kUsage, "suite size must be at least 1");
  std::vector<Binding> bindings = EnumerateBindings(set, lexicon);
  SuiteResult result;
  result.total_bindings = bindings.size();
  if (bindings.empty()) {
    throw Error(ErrorCode::kGeneration,
                "template '" + set.id + "' has no valid bindings");
  }
  const bool sample = bindings.size() > n;
  std::vector<std::size_t> order(bindings.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < order.size() && result.cases.size() < n; ++i) {
    if (sample) {
      std::size_t j = i + UniformIndex(rng, order.size() - i);
      std::swap(order[i], order[j]);
    }
    ++result.attempted;
    try {
      TestCase tc = Render(set, bindings[order[i]], lexicon, schema);
      tc.index = result.cases.size();
      tc.seed = seed;
      result.cases.push_back(std::move(tc));
    } catch (const Error& e) {
      result.diagnostics.push_back("binding " + std::to_string(order[i]) +
                                   ": " + e.what());
    }
  }
  const std::size_t skipped = result.diagnostics.size();
  if (result.cases.empty() || skipped * 100 > result.attempted) {
    std::string message = "template '" + set.id + "': " +
                          std::to_string(skipped) + " of " +
                          std::to_string(result.attempted) +
                          " bindings failed to render";
    if (!result.diagnostics.empty()) {
      message += "; first: " + result.diagnostics.front();
    }
    throw Error(ErrorCode::kGeneration, message);
  }
  return result;
}

Json TestCaseToJson(const TestCase& tc) {
  Json json = Json::object();
  json["template_id"] = tc.template_id;
  json["language"] = tc.language;
  json["context"] = tc.context;
  json["question"] = tc.question;
  json["gold_answer"] = tc.gold_answer;
  Json matchers = Json::array();
  for (const Matcher& m : tc.matchers) matchers.push_back(MatcherToJson(m));
  json["matchers"] = std::move(matchers);
  Json bindings = Json::object();
  for (const auto& [name, id] : tc.bindings) bindings[name] = id;
  json["bindings"] = std::move(bindings);
  json["index"] = tc.index;
  json["seed"] = tc.seed;
  return json;
}

TestCase TestCaseFromJson(const Json& json) {
  TestCase tc;
  try {
    tc.template_id = json.at("template_id").get<std::string>();
    tc.language = json.at("language").get<std::string>();
    tc.context = json.at("context").get<std::string>();
    tc.question = json.at("question").get<std::string>();
    tc.gold_answer = json.at("gold_answer").get<std::string>();
    for (const Json& m : json.at("matchers")) {
      tc.matchers.push_back(MatcherFromJson(m));
    }
    for (const auto& [name, id] : json.at("bindings").items()) {
      tc.bindings.emplace_back(name, id.get<std::string>());
    }
    tc.index = json.at("index").get<std::size_t>();
    tc.seed = json.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("malformed test case: ") + e.what());
  }
  if (tc.matchers.empty()) {
    throw Error(ErrorCode::kValidation, "test case has no matchers");
  }
  return tc;
}

std::string SuiteToJsonl(const std::vector<TestCase>& suite) {
  std::string out;
  for (const TestCase& tc : suite) {
    out += TestCaseToJson(tc).dump();
    out += '\n';
  }
  return out;
}

std::vector<TestCase> SuiteFromJsonl(std::string_view text) {
  std::vector<TestCase> suite;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      suite.push_back(TestCaseFromJson(
          ParseJsonStrict(line, "suite line " + std::to_string(line_no))));
    } catch (const Error& e) {
      throw Error(ErrorCode::kValidation,
                  "suite line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return suite;
}

}  // namespace m2c
