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

#include <gtest/gtest.h>

#include <random>

#include "m2c/assets.h"
#include "m2c/expander.h"
#include "test_util.h"

namespace m2c {
namespace {

using testing::CodeOf;

Matcher GoldForm(std::string text, std::string features,
                 std::vector<FormVariant> variants) {
  Matcher m;
  m.kind = MatcherKind::kGoldForm;
  m.values = {std::move(text)};
  m.type = "job";
  m.entry = "x";
  m.features = std::move(features);
  m.variants = std::move(variants);
  return m;
}

Matcher AnyOf(std::vector<std::string> values) {
  Matcher m;
  m.kind = MatcherKind::kAnyOf;
  m.values = std::move(values);
  return m;
}

Matcher Pattern(std::string regex) {
  Matcher m;
  m.kind = MatcherKind::kPattern;
  m.values = {std::move(regex)};
  return m;
}

// The Slovak cook from the temporal template.
std::vector<Matcher> Cook() {
  return {GoldForm("Kuchárkou.", "FEM.INS.SG",
                   {{"MASC.NOM.SG", "Kuchár."},
                    {"FEM.NOM.SG", "Kuchárka."},
                    {"INS.MASC.SG", "Kuchárom."},
                    {"FEM.INS.SG", "Kuchárkou."},
                    {"NOM.PL", "Kuchári."},
                    {"INS.PL", "Kuchármi."}})};
}

std::vector<Matcher> Two() {
  return {GoldForm("Две.", "FEM.NOM",
                   {{"MASC.NOM", "Два."}, {"FEM.NOM", "Две."},
                    {"NEUT.NOM", "Два."}, {"GEN.MASC", "Двух."}})};
}

TEST(NormalizeTest, Examples) {
  EXPECT_EQ(Normalize("  Mwalimu. "), "Mwalimu");
  EXPECT_EQ(Normalize(""), "");
  EXPECT_EQ(Normalize("六只。"), "六只");
  EXPECT_EQ(Normalize("a \t\n b.."), "a b.");
  EXPECT_EQ(Normalize("x ."), "x");
  // Decomposed a + combining acute becomes the precomposed letter.
  EXPECT_EQ(Normalize("Kucha\xCC\x81r"), "Kuchár");
}

TEST(NormalizeTest, Idempotent) {
  std::mt19937_64 rng(2);
  const std::vector<std::string> pieces = {"a", " ", ".", "。", "\t", "É",
                                           "e\xCC\x81", "x"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    for (int i = 0, n = rng() % 8; i < n; ++i) text += pieces[rng() % 8];
    std::string once = Normalize(text);
    // Only a further trailing period can change on a second pass.
    if (!once.ends_with(".") && !once.ends_with("。")) {
      EXPECT_EQ(Normalize(once), once) << text;
    }
    EXPECT_FALSE(once.starts_with(" ") || once.ends_with(" ")) << text;
    EXPECT_EQ(once.find("  "), std::string::npos);
  }
}

TEST(JudgeTest, SlovakCook) {
  Verdict wrong_case = Judge("Kuchárka.", Cook());
  EXPECT_EQ(wrong_case.kind, VerdictKind::kMorphologicalError);
  EXPECT_EQ(wrong_case.variant_features, "FEM.NOM.SG");
  Verdict right = Judge("Kuchárkou.", Cook());
  EXPECT_EQ(right.kind, VerdictKind::kCorrect);
  EXPECT_EQ(right.matcher_index, 0u);
  EXPECT_EQ(Judge("kuchárkou", Cook()).kind, VerdictKind::kCorrect);
  EXPECT_EQ(Judge("Vedcom.", Cook()).kind, VerdictKind::kIncorrect);
  // Only the first character is case-insensitive.
  EXPECT_EQ(Judge("KUCHÁRKOU", Cook()).kind, VerdictKind::kIncorrect);
}

TEST(JudgeTest, RussianNumeralGender) {
  Verdict v = Judge("Два.", Two());
  EXPECT_EQ(v.kind, VerdictKind::kMorphologicalError);
  EXPECT_EQ(v.variant_features, "MASC.NOM");
  EXPECT_EQ(Judge("Две", Two()).kind, VerdictKind::kCorrect);
  EXPECT_EQ(Judge("Три.", Two()).kind, VerdictKind::kIncorrect);
}

TEST(JudgeTest, MixedSuite) {
  auto make = [](std::vector<Matcher> matchers) {
    TestCase tc;
    tc.matchers = std::move(matchers);
    return tc;
  };
  std::vector<std::pair<TestCase, std::string>> predictions = {
      {make(Two()), "Два."},
      {make(Cook()), "Kuchárkou."},
      {make(Cook()), "Kuchárka."}};
  std::vector<Verdict> verdicts = JudgeSuite(predictions);
  ASSERT_EQ(verdicts.size(), 3u);
  EXPECT_EQ(verdicts[0].kind, VerdictKind::kMorphologicalError);
  EXPECT_EQ(verdicts[1].kind, VerdictKind::kCorrect);
  EXPECT_EQ(verdicts[2].kind, VerdictKind::kMorphologicalError);
  EXPECT_TRUE(JudgeSuite({}).empty());
  EXPECT_DOUBLE_EQ(MorphologicalErrorFraction(verdicts), 1.0);
}

TEST(JudgeTest, MatcherOrderIsAuthoritative) {
  std::vector<Matcher> matchers = {AnyOf({"a"}), Pattern("[a-z]"),
                                   AnyOf({"b"})};
  EXPECT_EQ(Judge("a", matchers).matcher_index, 0u);
  EXPECT_EQ(Judge("b", matchers).matcher_index, 1u);
  EXPECT_EQ(Judge("B", matchers).matcher_index, 1u);
  EXPECT_EQ(Judge("bb", matchers).kind, VerdictKind::kIncorrect);
}

TEST(JudgeTest, PatternIsFullMatch) {
  std::vector<Matcher> names = {
      Pattern("(?:Bohuš a Miroslav|Miroslav a Bohuš)")};
  EXPECT_EQ(Judge("Bohuš a Miroslav.", names).kind, VerdictKind::kCorrect);
  EXPECT_EQ(Judge("Miroslav a Bohuš", names).kind, VerdictKind::kCorrect);
  EXPECT_EQ(Judge("Bohús a Miroslav.", names).kind, VerdictKind::kIncorrect);
  EXPECT_EQ(Judge("Bohuš a Miroslav a Pavol", names).kind,
            VerdictKind::kIncorrect);
  EXPECT_EQ(CodeOf([] { CheckPattern("(unclosed"); }),
            ErrorCode::kValidation);
  EXPECT_FALSE(CodeOf([] { CheckPattern("a|b+"); }).has_value());
}

TEST(JudgeTest, NumericAcceptsDigitsAndSpelledForms) {
  // A toy numeral lexicon: every value has one or more spelled forms.
  const std::vector<std::pair<int, std::vector<std::string>>> lexicon = {
      {1, {"one", "first"}}, {2, {"two"}}, {3, {"three"}}, {12, {"twelve"}}};
  std::vector<std::string> universe = {"0", "1", "2", "3", "12", "21", "one",
                                       "first", "two", "three", "twelve",
                                       "One", "four", "-1", "1.0"};
  for (const auto& [value, forms] : lexicon) {
    Matcher m;
    m.kind = MatcherKind::kNumeric;
    m.numeric = value;
    m.values = forms;
    for (const std::string& candidate : universe) {
      bool expected = candidate == std::to_string(value);
      for (const std::string& f : forms) {
        expected = expected || EquivalentAnswers(candidate, f);
      }
      EXPECT_EQ(Judge(candidate, {m}).kind == VerdictKind::kCorrect, expected)
          << value << " vs " << candidate;
    }
  }
}

TEST(JudgeTest, CountsAndFraction) {
  std::vector<Verdict> verdicts;
  for (int i = 0; i < 5; ++i) verdicts.push_back({VerdictKind::kCorrect, 0, {}});
  for (int i = 0; i < 3; ++i) {
    verdicts.push_back({VerdictKind::kMorphologicalError, {}, "NOM"});
  }
  verdicts.push_back({VerdictKind::kIncorrect, {}, {}});
  EXPECT_DOUBLE_EQ(MorphologicalErrorFraction(verdicts), 0.75);
  EXPECT_DOUBLE_EQ(
      MorphologicalErrorFraction({{VerdictKind::kCorrect, 0, {}}}), 0.0);
}

TEST(JudgeTest, GoldAnswersAreCorrectAcrossShippedAssets) {
  for (const AssetPaths& paths : FindAssetPacks(testing::AssetDir())) {
    AssetPack pack = LoadAssetPack(paths);
    SuiteResult suite =
        GenerateSuite(pack.set, pack.lexicon, pack.schema, 300, 17);
    for (const TestCase& tc : suite.cases) {
      Verdict v = Judge(tc.gold_answer, tc.matchers);
      EXPECT_EQ(v.kind, VerdictKind::kCorrect)
          << pack.set.id << ": " << tc.gold_answer;
      // Morphological errors never carry the gold features.
      for (std::size_t i = 0; i < tc.matchers.size(); ++i) {
        const Matcher& m = tc.matchers[i];
        for (const FormVariant& variant : m.variants) {
          Verdict alt = Judge(variant.text, tc.matchers);
          if (alt.kind == VerdictKind::kMorphologicalError) {
            EXPECT_NE(alt.variant_features, m.features);
          }
        }
      }
    }
  }
}

TEST(MatcherJsonTest, RoundTrip) {
  Matcher numeric;
  numeric.kind = MatcherKind::kNumeric;
  numeric.numeric = 7;
  numeric.values = {"seven"};
  for (const Matcher& m : {Cook()[0], Two()[0], AnyOf({"a", "b"}),
                           Pattern("x+"), numeric}) {
    EXPECT_EQ(MatcherFromJson(MatcherToJson(m)), m);
  }
  EXPECT_TRUE(CodeOf([] {
                MatcherFromJson(Json::parse(R"({"kind": "fuzzy"})"));
              }).has_value());
  for (VerdictKind k : {VerdictKind::kCorrect, VerdictKind::kIncorrect,
                        VerdictKind::kMorphologicalError}) {
    EXPECT_EQ(ParseVerdictName(VerdictName(k)), k);
  }
  Json v = VerdictToJson({VerdictKind::kMorphologicalError, {}, "NOM.SG"});
  EXPECT_EQ(v["verdict"], "morphological_error");
  EXPECT_EQ(v["variant_features"], "NOM.SG");
  EXPECT_FALSE(v.contains("matcher_index"));
}

}  // namespace
}  // namespace m2c
