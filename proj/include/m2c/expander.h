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

// Binding enumeration, agreement resolution, rendering and seeded suite
// sampling.

#ifndef M2C_EXPANDER_H_
#define M2C_EXPANDER_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "m2c/json_util.h"
#include "m2c/lexicon.h"
#include "m2c/schema.h"
#include "m2c/template.h"
#include "m2c/validator.h"

namespace m2c {

struct Assignment {
  std::string placeholder;
  std::string type;
  std::size_t entry = 0;  // index into the type's entry list

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Binding {
  std::vector<Assignment> assignments;

  const Assignment* Find(std::string_view placeholder) const;
  friend bool operator==(const Binding&, const Binding&) = default;
};

struct TestCase {
  std::string template_id;
  std::string language;
  std::string context;
  std::string question;
  std::string gold_answer;
  std::vector<Matcher> matchers;
  std::vector<std::pair<std::string, std::string>> bindings;  // name -> id
  std::size_t index = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

Json TestCaseToJson(const TestCase& test_case);
TestCase TestCaseFromJson(const Json& json);
std::string SuiteToJsonl(const std::vector<TestCase>& suite);
std::vector<TestCase> SuiteFromJsonl(std::string_view text);

// Placeholder slots in enumeration order: types by first occurrence, then
// by index within a type.
std::vector<Assignment> BindingSlots(const TemplateSet& set);

// Row-major over canonical lexicon order, filtered by each type's
// repetition/order configuration. Throws Error(kValidation) for a type
// missing from the lexicon.
std::vector<Binding> EnumerateBindings(const TemplateSet& set,
                                       const Lexicon& lexicon);

// One rendered placeholder or function occurrence, for audits.
struct RenderTraceItem {
  std::string field;
  std::string node;        // placeholder name or "$function"
  std::string type;
  std::string entry;
  FeatureSet required;     // transform features stripped
  FeatureSet key;          // the stored key that was selected
  std::string surface;     // form before transforms
  std::vector<CopySpec> copies;
};

struct Rendered {
  TestCase test_case;
  std::vector<RenderTraceItem> trace;
};

// Renders context, question, answer and materializes the answer matchers.
// Throws Error carrying the template id and offending placeholder.
Rendered RenderWithTrace(const TemplateSet& set, const Binding& binding,
                         const Lexicon& lexicon, const FeatureSchema& schema);
TestCase Render(const TemplateSet& set, const Binding& binding,
                const Lexicon& lexicon, const FeatureSchema& schema);

// Resolves a single placeholder occurrence against a binding.
std::string ResolvePlaceholder(const TemplateSet& set,
                               const PlaceholderNode& node,
                               const Binding& binding, const Lexicon& lexicon,
                               const FeatureSchema& schema);
std::string ApplyFunction(const TemplateSet& set, const FunctionNode& node,
                          const Binding& binding, const Lexicon& lexicon,
                          const FeatureSchema& schema);

// Uniform integer in [0, bound) from raw 64-bit draws (rejection sampling,
// identical on every platform).
std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t bound);

struct SuiteResult {
  std::vector<TestCase> cases;
  std::size_t attempted = 0;
  std::size_t total_bindings = 0;
  std::vector<std::string> diagnostics;  // one per skipped binding
};

// All bindings in canonical order when there are at most `n`; otherwise a
// seeded uniform sample without replacement (partial Fisher-Yates). Bindings
// that fail to render are skipped; throws Error(kGeneration) when more than
// 1% of attempted bindings fail or no case renders.
SuiteResult GenerateSuite(const TemplateSet& set, const Lexicon& lexicon,
                          const FeatureSchema& schema, std::size_t n,
                          std::uint64_t seed);

}  // namespace m2c

#endif  // M2C_EXPANDER_H_
