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

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "m2c/assets.h"
#include "m2c/json_util.h"
#include "agreement_oracle.h"
#include "test_util.h"

namespace m2c {
namespace {

using testing::CodeOf;

TemplateSet MakeSet(const std::string& context, const std::string& question,
                    const std::string& answer, const std::string& configs = "{}",
                    const std::string& answer_spec = "") {
  std::string doc = R"({"id": "t", "language": "xx", "context": )" +
                    Json(context).dump() + R"(, "question": )" +
                    Json(question).dump() + R"(, "answer": )" +
                    Json(answer).dump() + R"(, "configs": )" + configs;
  if (!answer_spec.empty()) doc += R"(, "answer_spec": )" + answer_spec;
  return ParseTemplateSet(doc + "}");
}

Binding Bind(const TemplateSet& set, const Lexicon& lexicon,
             const std::map<std::string, std::string>& ids) {
  Binding binding;
  for (Assignment slot : BindingSlots(set)) {
    const LexiconType* type = lexicon.FindType(slot.type);
    const std::string& id = ids.at(slot.placeholder);
    for (std::size_t i = 0; i < type->entries.size(); ++i) {
      if (type->entries[i].id == id) slot.entry = i;
    }
    binding.assignments.push_back(slot);
  }
  return binding;
}

// Counts tuples of `k` entries out of `m` by brute force over all m^k.
std::size_t BruteCount(std::size_t m, std::size_t k, PlaceholderConfig c) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= m;
  std::size_t count = 0;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::size_t> tuple;
    std::size_t rest = code;
    for (std::size_t i = 0; i < k; ++i) {
      tuple.push_back(rest % m);
      rest /= m;
    }
    bool ok = true;
    std::set<std::size_t> seen(tuple.begin(), tuple.end());
    if (!c.repetition && seen.size() != k) ok = false;
    if (!c.order) {
      std::vector<std::size_t> sorted(tuple);
      std::sort(sorted.begin(), sorted.end());
      if (sorted != tuple) ok = false;
    }
    count += ok;
  }
  return count;
}

const char kNames[] = R"({"name": ["Ann", "Bo", "Cy"]})";

TEST(ExpanderTest, BindingCountsFollowConfigs) {
  Lexicon lex = LoadLexicon(kNames, FeatureSchema::Core());
  struct Row {
    bool repetition, order;
    std::size_t expected;
  };
  for (Row row : {Row{false, false, 3}, Row{false, true, 6},
                  Row{true, false, 6}, Row{true, true, 9}}) {
    std::string configs = std::string(R"({"name": {"repetition": )") +
                          (row.repetition ? "true" : "false") +
                          R"(, "order": )" + (row.order ? "true" : "false") +
                          "}}";
    TemplateSet set = MakeSet("{name1} and {name2}", "?", "{name1}", configs);
    EXPECT_EQ(EnumerateBindings(set, lex).size(), row.expected);
    EXPECT_EQ(BruteCount(3, 2, {row.repetition, row.order}), row.expected);
  }
}

TEST(ExpanderTest, BindingCountsMatchBruteForce) {
  std::string names = R"({"name": ["a", "b", "c", "d", "e"]})";
  Lexicon lex = LoadLexicon(names, FeatureSchema::Core());
  for (int rep = 0; rep < 2; ++rep) {
    for (int ord = 0; ord < 2; ++ord) {
      std::string configs = std::string(R"({"name": {"repetition": )") +
                            (rep ? "true" : "false") + R"(, "order": )" +
                            (ord ? "true" : "false") + "}}";
      TemplateSet set =
          MakeSet("{name1} {name2} {name3}", "?", "{name1}", configs);
      std::vector<Binding> bindings = EnumerateBindings(set, lex);
      EXPECT_EQ(bindings.size(),
                BruteCount(5, 3, {rep == 1, ord == 1}));
      std::set<std::vector<std::size_t>> distinct;
      for (const Binding& b : bindings) {
        std::vector<std::size_t> key;
        for (const Assignment& a : b.assignments) key.push_back(a.entry);
        distinct.insert(key);
      }
      EXPECT_EQ(distinct.size(), bindings.size());
    }
  }
}

const char kFrench[] = R"({
  "first_name": [
    {"id": "Marie", "intrinsic": ["FEM", "SG"], "forms": {"": "Marie"}},
    {"id": "Pierre", "intrinsic": ["MASC", "SG"], "forms": {"": "Pierre"}}
  ],
  "adj": [
    {"id": "grand", "forms": {"MASC": "grand", "FEM": "grande"}}
  ]
})";

TEST(ExpanderTest, FrenchGenderAgreement) {
  Lexicon lex = LoadLexicon(kFrench, FeatureSchema::Core());
  TemplateSet set = MakeSet("{first_name} est {adj.<first_name.GENDER>}.",
                            "?", "{first_name}");
  EXPECT_EQ(Render(set, Bind(set, lex, {{"first_name", "Marie"},
                                        {"adj", "grand"}}),
                   lex, FeatureSchema::Core())
                .context,
            "Marie est grande.");
  EXPECT_EQ(Render(set, Bind(set, lex, {{"first_name", "Pierre"},
                                        {"adj", "grand"}}),
                   lex, FeatureSchema::Core())
                .context,
            "Pierre est grand.");
}

TEST(ExpanderTest, ConditionalLiteral) {
  Lexicon lex = LoadLexicon(R"({"who": [
    {"id": "kids", "intrinsic": ["PL"], "forms": {"": "the kids"}},
    {"id": "Ann", "intrinsic": ["SG"], "forms": {"": "Ann"}}]})",
                            FeatureSchema::Core());
  TemplateSet set =
      MakeSet("{who} {is:who.SG|are:who.PL} here.", "?", "{who}");
  std::vector<std::string> contexts;
  for (const Binding& b : EnumerateBindings(set, lex)) {
    contexts.push_back(Render(set, b, lex, FeatureSchema::Core()).context);
  }
  EXPECT_EQ(contexts, (std::vector<std::string>{"the kids are here.",
                                                "Ann is here."}));

  Lexicon dual = LoadLexicon(
      R"({"who": [{"id": "pair", "intrinsic": ["DU"], "forms": {"": "x"}}]})",
      FeatureSchema::Core());
  EXPECT_EQ(CodeOf([&] {
              Render(set, EnumerateBindings(set, dual)[0], dual,
                     FeatureSchema::Core());
            }),
            ErrorCode::kNoGuardFired);
}

TEST(ExpanderTest, SwahiliCapitalizedProfession) {
  AssetPack pack = LoadAssetPack(PackPaths(testing::AssetDir() / "sw" /
                                           "temporal"));
  Binding binding = Bind(pack.set, pack.lexicon,
                         {{"name1", "Jabari"},
                          {"name2", "Amani"},
                          {"job1", "mkulima"},
                          {"job2", "mwalimu"}});
  TestCase tc = Render(pack.set, binding, pack.lexicon, pack.schema);
  EXPECT_EQ(tc.gold_answer, "Mwalimu.");
  EXPECT_EQ(tc.question, "Jabari atakuwa nani?");
  EXPECT_EQ(tc.context,
            "Jabari na Amani ni wakulima lakini Jabari atabadilisha kazi na "
            "atakuwa mwalimu.");
}

const char kNumbers[] = R"({"n": [
  {"id": "one", "forms": {"": "one"}, "numeric": 1},
  {"id": "two", "forms": {"": "two"}, "numeric": 2},
  {"id": "three", "forms": {"": "three"}, "numeric": 3},
  {"id": "many", "forms": {"": "many"}}]})";

TEST(ExpanderTest, FunctionResults) {
  Lexicon lex = LoadLexicon(kNumbers, FeatureSchema::Core());
  TemplateSet set = MakeSet("{n1} minus {n2}", "?", "{$diff(n1,n2)}");
  auto answer = [&](const char* a, const char* b) {
    return Render(set, Bind(set, lex, {{"n1", a}, {"n2", b}}), lex,
                  FeatureSchema::Core())
        .gold_answer;
  };
  EXPECT_EQ(answer("three", "one"), "two");
  EXPECT_EQ(answer("two", "one"), "one");
  EXPECT_EQ(CodeOf([&] { answer("two", "two"); }),
            ErrorCode::kResultNotInLexicon);
  EXPECT_EQ(CodeOf([&] { answer("one", "three"); }),
            ErrorCode::kResultNotInLexicon);
  EXPECT_EQ(CodeOf([&] { answer("many", "one"); }),
            ErrorCode::kMissingNumeric);

  TemplateSet unknown = MakeSet("{n1} {n2}", "?", "{$nope(n1,n2)}");
  EXPECT_EQ(CodeOf([&] {
              Render(unknown, Bind(unknown, lex, {{"n1", "one"}, {"n2", "one"}}),
                     lex, FeatureSchema::Core());
            }),
            ErrorCode::kUnknownFunction);
}

TEST(ExpanderTest, SuiteSkipsUnrenderableBindingsOnlyWithinBudget) {
  Lexicon lex = LoadLexicon(kNumbers, FeatureSchema::Core());
  // Most pairs have no difference in the lexicon.
  TemplateSet set = MakeSet("{n1} minus {n2}", "?", "{$diff(n1,n2)}");
  EXPECT_EQ(CodeOf([&] {
              GenerateSuite(set, lex, FeatureSchema::Core(), 100, 0);
            }),
            ErrorCode::kGeneration);
}

TEST(ExpanderTest, LiteralOnlySet) {
  Lexicon lex;
  TemplateSet set = MakeSet("It rains.", "Does it rain?", "Yes.");
  std::vector<Binding> bindings = EnumerateBindings(set, lex);
  ASSERT_EQ(bindings.size(), 1u);
  EXPECT_TRUE(bindings[0].assignments.empty());
  SuiteResult suite = GenerateSuite(set, lex, FeatureSchema::Core(), 5, 1);
  ASSERT_EQ(suite.cases.size(), 1u);
  EXPECT_EQ(suite.cases[0].gold_answer, "Yes.");
  EXPECT_EQ(suite.cases[0].matchers[0].values,
            (std::vector<std::string>{"Yes."}));
}

TEST(ExpanderTest, EmptyTypeHasNoBindings) {
  EXPECT_EQ(CodeOf([] {
              LoadLexicon(R"({"name": []})", FeatureSchema::Core());
            }),
            ErrorCode::kLexicon);
  Lexicon lex = LoadLexicon(R"({"name": ["a", "b"]})", FeatureSchema::Core());
  TemplateSet set = MakeSet("{name1} {name2} {name3}", "?", "{name1}",
                            R"({"name": {"repetition": false}})");
  EXPECT_TRUE(EnumerateBindings(set, lex).empty());
  EXPECT_EQ(CodeOf([&] {
              GenerateSuite(set, lex, FeatureSchema::Core(), 5, 1);
            }),
            ErrorCode::kGeneration);
  EXPECT_EQ(CodeOf([&] {
              GenerateSuite(MakeSet("a", "b", "c"), lex, FeatureSchema::Core(),
                            0, 1);
            }),
            ErrorCode::kUsage);
}

TEST(ExpanderTest, SamplingIsDeterministic) {
  AssetPack pack =
      LoadAssetPack(PackPaths(testing::AssetDir() / "it" / "spatial"));
  auto run = [&](std::uint64_t seed) {
    return SuiteToJsonl(
        GenerateSuite(pack.set, pack.lexicon, pack.schema, 50, seed).cases);
  };
  EXPECT_EQ(run(3), run(3));
  EXPECT_NE(run(3), run(4));

  // A budget covering every binding yields canonical order regardless of seed.
  AssetPack small =
      LoadAssetPack(PackPaths(testing::AssetDir() / "ar" / "negation"));
  std::vector<Binding> bindings = EnumerateBindings(small.set, small.lexicon);
  SuiteResult a =
      GenerateSuite(small.set, small.lexicon, small.schema, 100000, 1);
  SuiteResult b =
      GenerateSuite(small.set, small.lexicon, small.schema, 100000, 2);
  ASSERT_EQ(a.cases.size(), bindings.size());
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    TestCase expected =
        Render(small.set, bindings[i], small.lexicon, small.schema);
    EXPECT_EQ(a.cases[i].context, expected.context);
    EXPECT_EQ(a.cases[i].context, b.cases[i].context);
    EXPECT_EQ(a.cases[i].index, i);
  }
}

TEST(ExpanderTest, SampledCasesAreDistinct) {
  AssetPack pack =
      LoadAssetPack(PackPaths(testing::AssetDir() / "fi" / "spatial"));
  SuiteResult suite = GenerateSuite(pack.set, pack.lexicon, pack.schema, 500, 9);
  ASSERT_EQ(suite.cases.size(), 500u);
  std::set<std::vector<std::pair<std::string, std::string>>> seen;
  for (const TestCase& tc : suite.cases) seen.insert(tc.bindings);
  EXPECT_EQ(seen.size(), 500u);
}

TEST(ExpanderTest, UniformIndexIsUnbiased) {
  std::mt19937_64 rng(5);
  EXPECT_EQ(UniformIndex(rng, 1), 0u);
  std::vector<int> counts(3);
  const int kDraws = 30000;
  for (int i = 0; i < kDraws; ++i) ++counts[UniformIndex(rng, 3)];
  double chi2 = 0;
  for (int c : counts) {
    double d = c - kDraws / 3.0;
    chi2 += d * d / (kDraws / 3.0);
  }
  // 99.9th percentile of chi-square with 2 degrees of freedom.
  EXPECT_LT(chi2, 13.82);
}

TEST(ExpanderTest, RenderedFormsHonorAgreement) {
  std::mt19937_64 rng(11);
  std::size_t checked_copies = 0;
  for (const AssetPack& pack : [] {
         std::vector<AssetPack> packs;
         for (const AssetPaths& p : FindAssetPacks(testing::AssetDir())) {
           packs.push_back(LoadAssetPack(p));
         }
         return packs;
       }()) {
    std::vector<Binding> bindings = EnumerateBindings(pack.set, pack.lexicon);
    for (int trial = 0; trial < 200; ++trial) {
      const Binding& binding = bindings[UniformIndex(rng, bindings.size())];
      Rendered rendered;
      try {
        rendered =
            RenderWithTrace(pack.set, binding, pack.lexicon, pack.schema);
      } catch (const Error&) {
        continue;  // e.g. a difference with no lexicon entry
      }
      testing::AgreementCheck check =
          testing::CheckAgreement(rendered, binding, pack.lexicon);
      EXPECT_TRUE(check.violations.empty())
          << pack.set.id << ": " << check.violations.front();
      checked_copies += check.copies;
    }
  }
  EXPECT_GT(checked_copies, 1000);
}

TEST(ExpanderTest, AgreementOracleDetectsTampering) {
  Lexicon lex = LoadLexicon(kFrench, FeatureSchema::Core());
  TemplateSet set = MakeSet("{first_name} est {adj.<first_name.GENDER>}.",
                            "?", "{first_name}");
  Binding binding = Bind(set, lex, {{"first_name", "Marie"}, {"adj", "grand"}});
  Rendered rendered = RenderWithTrace(set, binding, lex, FeatureSchema::Core());
  EXPECT_TRUE(testing::CheckAgreement(rendered, binding, lex).violations.empty());
  for (RenderTraceItem& item : rendered.trace) {
    if (item.node == "adj") {
      item.required = testing::Set(FeatureSchema::Core(), {"MASC"});
    }
  }
  EXPECT_EQ(testing::CheckAgreement(rendered, binding, lex).violations.size(),
            2u);
}

TEST(ExpanderTest, SuiteJsonRoundTrip) {
  AssetPack pack =
      LoadAssetPack(PackPaths(testing::AssetDir() / "ru" / "numerals"));
  std::vector<TestCase> cases =
      GenerateSuite(pack.set, pack.lexicon, pack.schema, 20, 4).cases;
  std::string text = SuiteToJsonl(cases);
  EXPECT_EQ(SuiteFromJsonl(text), cases);
  EXPECT_EQ(SuiteToJsonl(SuiteFromJsonl(text)), text);
  EXPECT_TRUE(CodeOf([] { SuiteFromJsonl("{\"bad\": 1}\n"); }).has_value());
}

}  // namespace
}  // namespace m2c
