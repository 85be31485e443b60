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

// Prompt assembly, model clients and suite evaluation.

#ifndef M2C_HARNESS_H_
#define M2C_HARNESS_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "m2c/expander.h"
#include "m2c/json_util.h"
#include "m2c/report.h"
#include "m2c/validator.h"

namespace m2c {

struct PromptLabels {
  std::string language;
  std::optional<std::string> instruction;
  std::string context;
  std::string question;
  std::string answer;
};

// Reads {"sv": {"instruction", "context", "question", "answer"}, ...}.
std::map<std::string, PromptLabels> LoadPromptLabels(const Json& doc);
// The labels compiled into the library.
const std::map<std::string, PromptLabels>& DefaultPromptLabels();
const PromptLabels& LabelsFor(const std::map<std::string, PromptLabels>& all,
                              std::string_view language);

struct DecodingConfig {
  double temperature = 0.0;
  int max_steps = 20;
};
void CheckDecoding(const DecodingConfig& decoding);

enum class PromptMode { kZero, kOne };
std::string_view PromptModeName(PromptMode mode);
PromptMode ParsePromptMode(std::string_view name);

// One-shot mode requires an exemplar from the same template.
std::string BuildPrompt(const TestCase& test_case, PromptMode mode,
                        const TestCase* exemplar, const PromptLabels& labels);

// Seeded uniform choice among cases of the same template with another
// index. Throws Error(kUsage) when there is none.
const TestCase& PickExemplar(const std::vector<TestCase>& suite,
                             const TestCase& test_case, std::uint64_t seed);

struct ModelRequest {
  std::string prompt;
  DecodingConfig decoding;
  // The case being asked; builtin clients read it, remote ones ignore it.
  const TestCase* test_case = nullptr;
};

// Implementations must be safe to call from several threads. Transport
// failures throw Error(kTransport).
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string Id() const = 0;
  virtual std::string Complete(const ModelRequest& request) = 0;
};

struct ClientOptions {
  std::string endpoint;   // http
  std::string command;    // subprocess, run through /bin/sh -c
  std::chrono::milliseconds timeout{60000};
};

// "oracle", "mock:morph", "mock:garbage", "http", "subprocess".
std::unique_ptr<ModelClient> MakeClient(std::string_view name,
                                        const ClientOptions& options = {});

struct CaseRecord {
  std::size_t index = 0;
  std::string template_id;
  std::string language;
  std::string client;
  std::string mode;
  std::optional<std::size_t> exemplar_index;
  std::string prompt;
  std::string prediction;
  Verdict verdict;
  std::optional<std::string> error;

  friend bool operator==(const CaseRecord&, const CaseRecord&) = default;
};

Json RecordToJson(const CaseRecord& record);
CaseRecord RecordFromJson(const Json& json);
std::vector<CaseRecord> RecordsFromJsonl(std::string_view text);

struct EvalOptions {
  PromptMode mode = PromptMode::kZero;
  DecodingConfig decoding;
  std::map<std::string, PromptLabels> labels = DefaultPromptLabels();
  int parallelism = 1;
  std::uint64_t seed = 0;  // exemplar choice
  int attempts = 3;
  std::chrono::milliseconds base_delay{200};
  // Completed records are appended here as they finish; an existing journal
  // is resumed. At the end the file is rewritten in index order.
  std::optional<std::filesystem::path> journal;
};

struct EvalResult {
  std::vector<CaseRecord> records;  // index order
  EvalReport report;
  std::size_t transport_errors = 0;
};

EvalResult EvaluateSuite(const std::vector<TestCase>& suite,
                         ModelClient& client, const EvalOptions& options);

}  // namespace m2c

#endif  // M2C_HARNESS_H_
