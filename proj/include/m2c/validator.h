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

// Judging model predictions against materialized answer matchers.

#ifndef M2C_VALIDATOR_H_
#define M2C_VALIDATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "m2c/json_util.h"
#include "m2c/template.h"

namespace m2c {

struct FormVariant {
  std::string features;  // dot-joined key
  std::string text;      // full answer text realized with this form
  friend bool operator==(const FormVariant&, const FormVariant&) = default;
};

// A matcher bound to one test case. Self-contained: judging needs no
// lexicon because GoldForm carries the other variants of its entry.
struct Matcher {
  MatcherKind kind = MatcherKind::kAnyOf;
  // kAnyOf: accepted strings. kGoldForm: the gold text. kPattern: the
  // regular expression. kNumeric: the spelled forms of `numeric`.
  std::vector<std::string> values;
  // kGoldForm only.
  std::string type;
  std::string entry;
  std::string features;
  std::vector<FormVariant> variants;
  // kNumeric only.
  std::int64_t numeric = 0;

  friend bool operator==(const Matcher&, const Matcher&) = default;
};

enum class VerdictKind { kCorrect, kMorphologicalError, kIncorrect };

struct Verdict {
  VerdictKind kind = VerdictKind::kIncorrect;
  std::optional<std::size_t> matcher_index;
  std::optional<std::string> variant_features;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string_view VerdictName(VerdictKind kind);
VerdictKind ParseVerdictName(std::string_view name);

// NFC, trimmed, one trailing "." or "。" removed, whitespace runs collapsed.
std::string Normalize(std::string_view raw);

// Equality of normalized strings, case-insensitive on the first character.
bool EquivalentAnswers(std::string_view a, std::string_view b);

// Throws Error(kValidation) when a pattern does not compile.
void CheckPattern(std::string_view regex);

// First accepting matcher wins; otherwise a GoldForm variant match is a
// morphological error; otherwise incorrect.
Verdict Judge(std::string_view prediction, const std::vector<Matcher>& matchers);

struct TestCase;
std::vector<Verdict> JudgeSuite(
    const std::vector<std::pair<TestCase, std::string>>& predictions);

// Morphological errors over all wrong answers; 0 when nothing is wrong.
double MorphologicalErrorFraction(const std::vector<Verdict>& verdicts);

Json MatcherToJson(const Matcher& matcher);
Matcher MatcherFromJson(const Json& json);
Json VerdictToJson(const Verdict& verdict);

}  // namespace m2c

#endif  // M2C_VALIDATOR_H_
