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

#include "m2c/harness.h"

#include <gtest/gtest.h>
#include <stdlib.h>

#include <atomic>
#include <fstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "m2c/assets.h"
#include "m2c/json_util.h"
#include "test_util.h"

namespace m2c {
namespace {

using testing::CodeOf;
using testing::TempDir;

TestCase SwedishCase(std::size_t index, std::string context,
                     std::string question, std::string gold) {
  TestCase tc;
  tc.template_id = "sv_spatial";
  tc.language = "sv";
  tc.context = std::move(context);
  tc.question = std::move(question);
  tc.gold_answer = gold;
  Matcher m;
  m.values = {gold};
  tc.matchers = {m};
  tc.index = index;
  return tc;
}

TEST(PromptTest, SwedishZeroAndOneShot) {
  const PromptLabels& sv = LabelsFor(DefaultPromptLabels(), "sv");
  TestCase target = SwedishCase(
      0, "Boken är under soffan och pennan är på hyllan.", "Var är pennan?",
      "På hyllan");
  TestCase exemplar = SwedishCase(
      1, "Pennan är under stolen och telefonen är på fönstret.",
      "Var är telefonen?", "På fönstret");
  EXPECT_EQ(BuildPrompt(target, PromptMode::kZero, nullptr, sv),
            "Svara på frågan.\n\nKontext: Boken är under soffan och pennan är "
            "på hyllan.\nFråga: Var är pennan?\nSvar:");
  EXPECT_EQ(BuildPrompt(target, PromptMode::kOne, &exemplar, sv),
            "Svara på frågan.\n\nKontext: Pennan är under stolen och "
            "telefonen är på fönstret.\nFråga: Var är telefonen?\nSvar: På "
            "fönstret\nKontext: Boken är under soffan och pennan är på "
            "hyllan.\nFråga: Var är pennan?\nSvar:");
  EXPECT_EQ(CodeOf([&] { BuildPrompt(target, PromptMode::kOne, nullptr, sv); }),
            ErrorCode::kUsage);
  EXPECT_EQ(
      CodeOf([&] { BuildPrompt(target, PromptMode::kOne, &target, sv); }),
      ErrorCode::kUsage);
}

TEST(PromptTest, WithoutInstruction) {
  PromptLabels labels{"sv", std::nullopt, "Kontext", "Fråga", "Svar"};
  TestCase tc = SwedishCase(0, "C.", "Q?", "A");
  EXPECT_EQ(BuildPrompt(tc, PromptMode::kZero, nullptr, labels),
            "Kontext: C.\nFråga: Q?\nSvar:");
  labels.instruction = "";
  EXPECT_EQ(BuildPrompt(tc, PromptMode::kZero, nullptr, labels),
            "Kontext: C.\nFråga: Q?\nSvar:");
}

TEST(PromptTest, LabelsCoverShippedLanguages) {
  for (const AssetPaths& paths : FindAssetPacks(testing::AssetDir())) {
    AssetPack pack = LoadAssetPack(paths);
    EXPECT_NO_THROW(LabelsFor(DefaultPromptLabels(), pack.set.language));
  }
  EXPECT_TRUE(CodeOf([] { LabelsFor(DefaultPromptLabels(), "xx"); })
                  .has_value());
  EXPECT_TRUE(CodeOf([] {
                LoadPromptLabels(Json::parse(
                    R"({"sv": {"context": "", "question": "Q", "answer": "A"}})"));
              }).has_value());
}

TEST(ExemplarTest, Choice) {
  std::vector<TestCase> two = {SwedishCase(0, "a", "b", "c"),
                               SwedishCase(1, "d", "e", "f")};
  EXPECT_EQ(PickExemplar(two, two[0], 5).index, 1u);
  EXPECT_EQ(PickExemplar(two, two[1], 5).index, 0u);

  std::vector<TestCase> many;
  for (std::size_t i = 0; i < 20; ++i) many.push_back(SwedishCase(i, "", "", ""));
  many[7].template_id = "other";
  std::set<std::size_t> chosen;
  for (std::size_t i = 0; i < 20; ++i) {
    if (i == 7) continue;
    const TestCase& e = PickExemplar(many, many[i], 42);
    EXPECT_NE(e.index, i);
    EXPECT_EQ(e.template_id, many[i].template_id);
    EXPECT_EQ(&PickExemplar(many, many[i], 42), &e);
    chosen.insert(e.index);
  }
  EXPECT_GT(chosen.size(), 5u);
  EXPECT_EQ(CodeOf([&] { PickExemplar(many, many[7], 1); }), ErrorCode::kUsage);
  std::vector<TestCase> one = {two[0]};
  EXPECT_EQ(CodeOf([&] { PickExemplar(one, one[0], 1); }), ErrorCode::kUsage);
}

TEST(DecodingTest, Bounds) {
  EXPECT_NO_THROW(CheckDecoding({}));
  EXPECT_TRUE(CodeOf([] { CheckDecoding({-0.1, 20}); }).has_value());
  EXPECT_TRUE(CodeOf([] { CheckDecoding({0, 0}); }).has_value());
}

std::vector<TestCase> Suite(const char* pack, std::size_t n) {
  AssetPack p = LoadAssetPack(
      PackPaths(testing::AssetDir() / std::filesystem::path(pack)));
  return GenerateSuite(p.set, p.lexicon, p.schema, n, 1).cases;
}

EvalOptions Fast() {
  EvalOptions options;
  options.base_delay = std::chrono::milliseconds(0);
  return options;
}

TEST(EvaluateTest, BuiltinClients) {
  std::vector<TestCase> suite = Suite("sk/temporal", 40);
  for (PromptMode mode : {PromptMode::kZero, PromptMode::kOne}) {
    EvalOptions options = Fast();
    options.mode = mode;
    auto oracle = MakeClient("oracle");
    EvalResult r = EvaluateSuite(suite, *oracle, options);
    ASSERT_EQ(r.report.rows.size(), 1u);
    EXPECT_DOUBLE_EQ(r.report.rows[0].Accuracy(), 1.0);
    for (const CaseRecord& rec : r.records) {
      if (mode == PromptMode::kOne) {
        ASSERT_TRUE(rec.exemplar_index.has_value());
        EXPECT_NE(*rec.exemplar_index, rec.index);
      } else {
        EXPECT_FALSE(rec.exemplar_index.has_value());
      }
    }
  }
  auto morph = MakeClient("mock:morph");
  EvalResult m = EvaluateSuite(suite, *morph, Fast());
  EXPECT_DOUBLE_EQ(m.report.rows[0].Accuracy(), 0.0);
  EXPECT_DOUBLE_EQ(m.report.rows[0].MorphFraction(), 1.0);
  auto garbage = MakeClient("mock:garbage");
  EvalResult g = EvaluateSuite(suite, *garbage, Fast());
  EXPECT_DOUBLE_EQ(g.report.rows[0].Accuracy(), 0.0);
  EXPECT_DOUBLE_EQ(g.report.rows[0].MorphFraction(), 0.0);
  EXPECT_TRUE(CodeOf([] { MakeClient("gpt"); }).has_value());
}

// Fails the first `failures` calls for every prompt.
class FlakyClient : public ModelClient {
 public:
  explicit FlakyClient(int failures) : failures_(failures) {}
  std::string Id() const override { return "flaky"; }
  std::string Complete(const ModelRequest& request) override {
    ++calls;
    std::lock_guard<std::mutex> lock(mu_);
    if (seen_[request.prompt]++ < failures_) {
      throw Error(ErrorCode::kTransport, "flaky");
    }
    return request.test_case->gold_answer;
  }
  std::atomic<int> calls{0};

 private:
  int failures_;
  std::mutex mu_;
  std::map<std::string, int> seen_;
};

TEST(EvaluateTest, RetriesTransportFailures) {
  std::vector<TestCase> suite = Suite("it/spatial", 10);
  FlakyClient recovers(2);
  EvalResult ok = EvaluateSuite(suite, recovers, Fast());
  EXPECT_EQ(recovers.calls, 30);
  EXPECT_EQ(ok.transport_errors, 0u);
  EXPECT_DOUBLE_EQ(ok.report.rows[0].Accuracy(), 1.0);

  FlakyClient broken(3);
  EvalResult bad = EvaluateSuite(suite, broken, Fast());
  EXPECT_EQ(broken.calls, 30);
  EXPECT_EQ(bad.transport_errors, 10u);
  EXPECT_EQ(bad.report.rows[0].transport_errors, 10u);
  EXPECT_EQ(bad.report.rows[0].incorrect, 10u);
  for (const CaseRecord& r : bad.records) {
    EXPECT_TRUE(r.error.has_value());
    EXPECT_EQ(r.verdict.kind, VerdictKind::kIncorrect);
  }
}

class CountingOracle : public ModelClient {
 public:
  std::string Id() const override { return "oracle"; }
  std::string Complete(const ModelRequest& request) override {
    ++calls;
    return request.test_case->gold_answer;
  }
  std::atomic<int> calls{0};
};

TEST(EvaluateTest, JournalResumes) {
  TempDir dir;
  std::vector<TestCase> suite = Suite("zh/measure", 30);
  EvalOptions options = Fast();
  options.journal = dir.path() / "records.jsonl";
  CountingOracle first;
  EvalResult full = EvaluateSuite(suite, first, options);
  EXPECT_EQ(first.calls, 30);
  std::string text = ReadFile(*options.journal);
  EXPECT_EQ(RecordsFromJsonl(text), full.records);

  // Keep 12 completed records, then resume.
  std::string partial;
  std::size_t pos = 0;
  for (int i = 0; i < 12; ++i) {
    std::size_t end = text.find('\n', pos) + 1;
    partial += text.substr(pos, end - pos);
    pos = end;
  }
  WriteFile(*options.journal, partial);
  CountingOracle second;
  EvalResult resumed = EvaluateSuite(suite, second, options);
  EXPECT_EQ(second.calls, 18);
  EXPECT_EQ(resumed.records, full.records);
  EXPECT_EQ(ReadFile(*options.journal), text);

  CountingOracle third;
  EvaluateSuite(suite, third, options);
  EXPECT_EQ(third.calls, 0);

  // A journal from another run is refused.
  EvalOptions other = options;
  other.mode = PromptMode::kOne;
  CountingOracle fourth;
  EXPECT_EQ(CodeOf([&] { EvaluateSuite(suite, fourth, other); }),
            ErrorCode::kValidation);
}

TEST(EvaluateTest, FailedRecordsAreRetriedOnResume) {
  TempDir dir;
  std::vector<TestCase> suite = Suite("ar/negation", 5);
  EvalOptions options = Fast();
  options.journal = dir.path() / "j.jsonl";
  FlakyClient broken(3);
  EvaluateSuite(suite, broken, options);
  FlakyClient healthy(0);
  EvalResult r = EvaluateSuite(suite, healthy, options);
  EXPECT_EQ(healthy.calls, 5);
  EXPECT_EQ(r.transport_errors, 0u);
}

TEST(EvaluateTest, ParallelismDoesNotChangeRecords) {
  std::vector<TestCase> suite = Suite("ru/numerals", 60);
  EvalOptions options = Fast();
  options.mode = PromptMode::kOne;
  options.seed = 3;
  auto client = MakeClient("mock:morph");
  EvalResult serial = EvaluateSuite(suite, *client, options);
  options.parallelism = 4;
  EvalResult parallel = EvaluateSuite(suite, *client, options);
  EXPECT_EQ(serial.records, parallel.records);
  options.parallelism = 0;
  EXPECT_TRUE(CodeOf([&] { EvaluateSuite(suite, *client, options); })
                  .has_value());
}

TEST(RecordJsonTest, RoundTrip) {
  CaseRecord r;
  r.index = 4;
  r.template_id = "t";
  r.language = "ru";
  r.client = "http";
  r.mode = "one";
  r.exemplar_index = 2;
  r.prompt = "P\nQ";
  r.prediction = "Два.";
  r.verdict = {VerdictKind::kMorphologicalError, std::nullopt, "MASC.NOM"};
  r.error = std::nullopt;
  EXPECT_EQ(RecordFromJson(RecordToJson(r)), r);
  Json json = RecordToJson(r);
  EXPECT_EQ(json["verdict"], "morphological_error");
  EXPECT_EQ(json["variant_features"], "MASC.NOM");
}

TEST(SubprocessClientTest, LineProtocol) {
  TempDir dir;
  std::filesystem::path script = dir.path() / "model.sh";
  // Answers every request with the length of its input line.
  WriteFile(script,
            "while IFS= read -r line; do\n"
            "  printf '{\"text\": \"%s\"}\\n' \"${#line}\"\n"
            "done\n");
  ClientOptions options;
  options.command = "sh " + script.string();
  options.timeout = std::chrono::milliseconds(5000);
  auto client = MakeClient("subprocess", options);
  EXPECT_EQ(client->Id(), "subprocess");
  ModelRequest request{"abc", {}, nullptr};
  std::string expected =
      std::to_string(Json{{"prompt", "abc"}, {"temperature", 0.0},
                          {"max_steps", 20}}
                         .dump()
                         .size());
  EXPECT_EQ(client->Complete(request), expected);
  EXPECT_EQ(client->Complete(request), expected);

  options.command = "exit 0";
  auto dead = MakeClient("subprocess", options);
  EXPECT_EQ(CodeOf([&] { dead->Complete(request); }), ErrorCode::kTransport);

  options.command = "sleep 5";
  options.timeout = std::chrono::milliseconds(100);
  auto slow = MakeClient("subprocess", options);
  EXPECT_EQ(CodeOf([&] { slow->Complete(request); }), ErrorCode::kTransport);
}

TEST(HttpClientTest, PostsJson) {
  httplib::Server server;
  std::string auth;
  Json body;
  server.Post("/v1/complete", [&](const httplib::Request& req,
                                  httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    body = Json::parse(req.body);
    res.set_content(R"({"text": "На столе."})", "application/json");
  });
  server.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
  });
  server.Post("/garbled", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("M2C_API_KEY", "secret", 1);
  ClientOptions options;
  options.timeout = std::chrono::milliseconds(5000);
  std::string base = "http://127.0.0.1:" + std::to_string(port);
  options.endpoint = base + "/v1/complete";
  auto client = MakeClient("http", options);
  unsetenv("M2C_API_KEY");
  ModelRequest request{"Q", {0.0, 7}, nullptr};
  EXPECT_EQ(client->Complete(request), "На столе.");
  EXPECT_EQ(auth, "Bearer secret");
  EXPECT_EQ(body["prompt"], "Q");
  EXPECT_EQ(body["max_steps"], 7);
  EXPECT_EQ(body["temperature"], 0.0);

  for (const char* path : {"/broken", "/garbled", "/missing"}) {
    options.endpoint = base + path;
    auto bad = MakeClient("http", options);
    EXPECT_EQ(CodeOf([&] { bad->Complete(request); }), ErrorCode::kTransport)
        << path;
  }
  server.stop();
  thread.join();

  options.endpoint = "not a url";
  EXPECT_TRUE(CodeOf([&] { MakeClient("http", options); }).has_value());
}

}  // namespace
}  // namespace m2c
