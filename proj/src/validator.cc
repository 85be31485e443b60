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

#include "m2c/validator.h"

#include <unicode/regex.h>
#include <unicode/unistr.h>

#include <memory>

#include "m2c/error.h"
#include "m2c/expander.h"
#include "m2c/unicode.h"

namespace m2c {
namespace {

std::unique_ptr<icu::RegexPattern> Compile(std::string_view regex) {
  UErrorCode status = U_ZERO_ERROR;
  UParseError parse_error;
  std::unique_ptr<icu::RegexPattern> pattern(icu::RegexPattern::compile(
      icu::UnicodeString::fromUTF8(
          icu::StringPiece(regex.data(), static_cast<int32_t>(regex.size()))),
      0, parse_error, status));
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kValidation,
                "pattern /" + std::string(regex) + "/ does not compile: " +
                    u_errorName(status) + " at offset " +
                    std::to_string(parse_error.offset));
  }
  return pattern;
}

bool FullMatch(const icu::RegexPattern& pattern, const std::string& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString input = icu::UnicodeString::fromUTF8(text);
  std::unique_ptr<icu::RegexMatcher> matcher(pattern.matcher(input, status));
  if (U_FAILURE(status)) return false;
  bool matched = matcher->matches(status);
  return U_SUCCESS(status) && matched;
}

// Tries the prediction as given and with its first character case-folded
// and capitalized.
bool PatternAccepts(std::string_view regex, const std::string& prediction) {
  auto pattern = Compile(regex);
  for (const std::string& candidate :
       {prediction, unicode::FoldFirst(prediction),
        unicode::CapitalizeFirst(prediction)}) {
    if (FullMatch(*pattern, candidate)) return true;
  }
  return false;
}

bool AnyEquivalent(const std::vector<std::string>& values,
                   std::string_view prediction) {
  for (const std::string& value : values) {
    if (EquivalentAnswers(value, prediction)) return true;
  }
  return false;
}

bool Accepts(const Matcher& matcher, const std::string& prediction) {
  switch (matcher.kind) {
    case MatcherKind::kGoldForm:
    case MatcherKind::kAnyOf:
      return AnyEquivalent(matcher.values, prediction);
    case MatcherKind::kPattern:
      return !matcher.values.empty() &&
             PatternAccepts(matcher.values.front(), prediction);
    case MatcherKind::kNumeric:
      return prediction == std::to_string(matcher.numeric) ||
             AnyEquivalent(matcher.values, prediction);
  }
  return false;
}

std::string_view KindName(MatcherKind kind) {
  switch (kind) {
    case MatcherKind::kGoldForm:
      return "gold_form";
    case MatcherKind::kAnyOf:
      return "any_of";
    case MatcherKind::kPattern:
      return "pattern";
    case MatcherKind::kNumeric:
      return "numeric";
  }
  return "";
}

}  // namespace

std::string_view VerdictName(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kCorrect:
      return "correct";
    case VerdictKind::kMorphologicalError:
      return "morphological_error";
    case VerdictKind::kIncorrect:
      return "incorrect";
  }
  return "";
}

VerdictKind ParseVerdictName(std::string_view name) {
  for (VerdictKind kind :
       {VerdictKind::kCorrect, VerdictKind::kMorphologicalError,
        VerdictKind::kIncorrect}) {
    if (VerdictName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kValidation,
              "unknown verdict '" + std::string(name) + "'");
}

std::string Normalize(std::string_view raw) {
  std::string text = unicode::CollapseWhitespace(unicode::ToNfc(raw));
  static constexpr std::string_view kIdeographicStop = "\xE3\x80\x82";
  if (!text.empty() && text.back() == '.') {
    text.pop_back();
  } else if (text.size() >= kIdeographicStop.size() &&
             std::string_view(text).substr(text.size() -
                                           kIdeographicStop.size()) ==
                 kIdeographicStop) {
    text.resize(text.size() - kIdeographicStop.size());
  }
  return unicode::CollapseWhitespace(text);
}

bool EquivalentAnswers(std::string_view a, std::string_view b) {
  return unicode::FoldFirst(Normalize(a)) == unicode::FoldFirst(Normalize(b));
}

void CheckPattern(std::string_view regex) { Compile(regex); }

Verdict Judge(std::string_view prediction,
              const std::vector<Matcher>& matchers) {
  const std::string normalized = Normalize(prediction);
  for (std::size_t i = 0; i < matchers.size(); ++i) {
    if (Accepts(matchers[i], normalized)) {
      return Verdict{VerdictKind::kCorrect, i, std::nullopt};
    }
  }
  for (std::size_t i = 0; i < matchers.size(); ++i) {
    const Matcher& matcher = matchers[i];
    if (matcher.kind != MatcherKind::kGoldForm) continue;
    for (const FormVariant& variant : matcher.variants) {
      if (variant.features == matcher.features) continue;
      if (EquivalentAnswers(variant.text, normalized)) {
        return Verdict{VerdictKind::kMorphologicalError, i, variant.features};
      }
    }
  }
  return Verdict{};
}

std::vector<Verdict> JudgeSuite(
    const std::vector<std::pair<TestCase, std::string>>& predictions) {
  std::vector<Verdict> verdicts;
  verdicts.reserve(predictions.size());
  for (const auto& [test_case, prediction] : predictions) {
    verdicts.push_back(Judge(prediction, test_case.matchers));
  }
  return verdicts;
}

double MorphologicalErrorFraction(const std::vector<Verdict>& verdicts) {
  std::size_t morph = 0;
  std::size_t wrong = 0;
  for (const Verdict& v : verdicts) {
    if (v.kind == VerdictKind::kCorrect) continue;
    ++wrong;
    if (v.kind == VerdictKind::kMorphologicalError) ++morph;
  }
  return wrong == 0 ? 0.0 : static_cast<double>(morph) / wrong;
}

Json MatcherToJson(const Matcher& matcher) {
  Json json = Json::object();
  json["kind"] = KindName(matcher.kind);
  switch (matcher.kind) {
    case MatcherKind::kAnyOf:
      json["values"] = matcher.values;
      break;
    case MatcherKind::kPattern:
      json["regex"] = matcher.values.at(0);
      break;
    case MatcherKind::kGoldForm: {
      json["text"] = matcher.values.at(0);
      json["type"] = matcher.type;
      json["entry"] = matcher.entry;
      json["features"] = matcher.features;
      Json variants = Json::array();
      for (const FormVariant& v : matcher.variants) {
        variants.push_back(Json{{"features", v.features}, {"text", v.text}});
      }
      json["variants"] = std::move(variants);
      break;
    }
    case MatcherKind::kNumeric:
      json["value"] = matcher.numeric;
      json["forms"] = matcher.values;
      break;
  }
  return json;
}

Matcher MatcherFromJson(const Json& json) {
  Matcher matcher;
  try {
    const std::string kind = json.at("kind").get<std::string>();
    if (kind == "any_of") {
      matcher.kind = MatcherKind::kAnyOf;
      matcher.values = json.at("values").get<std::vector<std::string>>();
      if (matcher.values.empty()) {
        throw Error(ErrorCode::kValidation, "any_of matcher has no values");
      }
    } else if (kind == "pattern") {
      matcher.kind = MatcherKind::kPattern;
      matcher.values.push_back(json.at("regex").get<std::string>());
      CheckPattern(matcher.values.front());
    } else if (kind == "gold_form") {
      matcher.kind = MatcherKind::kGoldForm;
      matcher.values.push_back(json.at("text").get<std::string>());
      matcher.type = json.at("type").get<std::string>();
      matcher.entry = json.at("entry").get<std::string>();
      matcher.features = json.at("features").get<std::string>();
      for (const Json& v : json.at("variants")) {
        matcher.variants.push_back(FormVariant{
            v.at("features").get<std::string>(), v.at("text").get<std::string>()});
      }
    } else if (kind == "numeric") {
      matcher.kind = MatcherKind::kNumeric;
      matcher.numeric = json.at("value").get<std::int64_t>();
      matcher.values = json.at("forms").get<std::vector<std::string>>();
    } else {
      throw Error(ErrorCode::kValidation,
                  "unknown matcher kind '" + kind + "'");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("malformed matcher: ") + e.what());
  }
  return matcher;
}

Json VerdictToJson(const Verdict& verdict) {
  Json json = Json::object();
  json["verdict"] = VerdictName(verdict.kind);
  if (verdict.matcher_index) json["matcher_index"] = *verdict.matcher_index;
  if (verdict.variant_features) {
    json["variant_features"] = *verdict.variant_features;
  }
  return json;
}

}  // namespace m2c
