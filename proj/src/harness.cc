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

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include "m2c/embedded.h"
#include "m2c/error.h"
#include "m2c/model_clients.h"

namespace m2c {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string Block(const TestCase& tc, const PromptLabels& labels) {
  return labels.context + ": " + tc.context + "\n" + labels.question + ": " +
         tc.question + "\n" + labels.answer + ":";
}

// Reads an existing journal. A torn final line from an interrupted run is
// dropped.
std::vector<CaseRecord> ReadJournal(const std::filesystem::path& path) {
  std::string text = ReadFile(path);
  if (!text.empty() && text.back() != '\n') {
    std::size_t cut = text.rfind('\n');
    text.resize(cut == std::string::npos ? 0 : cut + 1);
  }
  return RecordsFromJsonl(text);
}

class Journal {
 public:
  explicit Journal(const std::filesystem::path& path)
      : out_(path, std::ios::app | std::ios::binary) {
    if (!out_) {
      throw Error(ErrorCode::kIo, "cannot open journal " + path.string());
    }
  }
  void Append(const CaseRecord& record) {
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << RecordToJson(record).dump() << '\n';
    out_.flush();
  }

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

}  // namespace

std::map<std::string, PromptLabels> LoadPromptLabels(const Json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kValidation, "prompt labels must be an object");
  }
  std::map<std::string, PromptLabels> out;
  for (const auto& [language, value] : doc.items()) {
    PromptLabels labels;
    labels.language = language;
    try {
      for (const auto& [field, _] : value.items()) {
        if (field != "instruction" && field != "context" &&
            field != "question" && field != "answer") {
          throw Error(ErrorCode::kValidation,
                      "unknown label field '" + field + "'");
        }
      }
      if (value.contains("instruction")) {
        std::string instruction = value["instruction"].get<std::string>();
        if (!instruction.empty()) labels.instruction = instruction;
      }
      labels.context = value.at("context").get<std::string>();
      labels.question = value.at("question").get<std::string>();
      labels.answer = value.at("answer").get<std::string>();
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kValidation,
                  "labels for '" + language + "': " + e.what());
    }
    if (labels.context.empty() || labels.question.empty() ||
        labels.answer.empty()) {
      throw Error(ErrorCode::kValidation,
                  "labels for '" + language + "' must be non-empty");
    }
    out.emplace(language, std::move(labels));
  }
  return out;
}

const std::map<std::string, PromptLabels>& DefaultPromptLabels() {
  static const auto* labels = new std::map<std::string, PromptLabels>(
      LoadPromptLabels(ParseJsonStrict(DefaultPromptLabelsDocument(),
                                       "embedded prompt labels")));
  return *labels;
}

const PromptLabels& LabelsFor(const std::map<std::string, PromptLabels>& all,
                              std::string_view language) {
  auto it = all.find(std::string(language));
  if (it == all.end()) {
    throw Error(ErrorCode::kValidation,
                "no prompt labels for language '" + std::string(language) +
                    "'");
  }
  return it->second;
}

void CheckDecoding(const DecodingConfig& decoding) {
  if (!(decoding.temperature >= 0.0)) {
    throw Error(ErrorCode::kUsage, "temperature must be non-negative");
  }
  if (decoding.max_steps < 1) {
    throw Error(ErrorCode::kUsage, "max steps must be at least 1");
  }
}

std::string_view PromptModeName(PromptMode mode) {
  return mode == PromptMode::kZero ? "zero" : "one";
}

PromptMode ParsePromptMode(std::string_view name) {
  if (name == "zero") return PromptMode::kZero;
  if (name == "one") return PromptMode::kOne;
  throw Error(ErrorCode::kUsage,
              "unknown prompt mode '" + std::string(name) + "'");
}

std::string BuildPrompt(const TestCase& test_case, PromptMode mode,
                        const TestCase* exemplar, const PromptLabels& labels) {
  std::string prompt;
  if (labels.instruction && !labels.instruction->empty()) prompt = *labels.instruction + "\n\n";
  if (mode == PromptMode::kOne) {
    if (exemplar == nullptr) {
      throw Error(ErrorCode::kUsage, "one-shot prompt needs an exemplar");
    }
    if (exemplar->template_id != test_case.template_id ||
        exemplar->index == test_case.index) {
      throw Error(ErrorCode::kUsage,
                  "exemplar must be another case of the same template");
    }
    prompt += Block(*exemplar, labels) + " " + exemplar->gold_answer + "\n";
  }
  return prompt + Block(test_case, labels);
}

const TestCase& PickExemplar(const std::vector<TestCase>& suite,
                             const TestCase& test_case, std::uint64_t seed) {
  std::vector<const TestCase*> candidates;
  for (const TestCase& other : suite) {
    if (other.template_id == test_case.template_id &&
        other.index != test_case.index) {
      candidates.push_back(&other);
    }
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::kUsage, "template '" + test_case.template_id +
                                       "' has no other case to use as an "
                                       "exemplar");
  }
  std::mt19937_64 rng(SplitMix64(seed ^ SplitMix64(test_case.index)));
  return *candidates[UniformIndex(rng, candidates.size())];
}

std::unique_ptr<ModelClient> MakeClient(std::string_view name,
                                        const ClientOptions& options) {
  if (name == "oracle") return MakeOracleClient();
  if (name == "mock:morph") return MakeMorphMockClient();
  if (name == "mock:garbage") return MakeGarbageMockClient();
  if (name == "http") {
    if (options.endpoint.empty()) {
      throw Error(ErrorCode::kUsage, "http client needs --endpoint");
    }
    return MakeHttpClient(options.endpoint, options.timeout);
  }
  if (name == "subprocess") {
    if (options.command.empty()) {
      throw Error(ErrorCode::kUsage, "subprocess client needs --command");
    }
    return MakeSubprocessClient(options.command, options.timeout);
  }
  throw Error(ErrorCode::kUsage, "unknown client '" + std::string(name) + "'");
}

Json RecordToJson(const CaseRecord& record) {
  Json json = Json::object();
  json["index"] = record.index;
  json["template_id"] = record.template_id;
  json["language"] = record.language;
  json["client"] = record.client;
  json["mode"] = record.mode;
  if (record.exemplar_index) json["exemplar_index"] = *record.exemplar_index;
  json["prompt"] = record.prompt;
  json["prediction"] = record.prediction;
  const Json verdict = VerdictToJson(record.verdict);
  for (const auto& [key, value] : verdict.items()) {
    json[key] = value;
  }
  if (record.error) json["error"] = *record.error;
  return json;
}

CaseRecord RecordFromJson(const Json& json) {
  CaseRecord record;
  try {
    record.index = json.at("index").get<std::size_t>();
    record.template_id = json.at("template_id").get<std::string>();
    record.language = json.at("language").get<std::string>();
    record.client = json.at("client").get<std::string>();
    record.mode = json.at("mode").get<std::string>();
    if (json.contains("exemplar_index")) {
      record.exemplar_index = json["exemplar_index"].get<std::size_t>();
    }
    record.prompt = json.at("prompt").get<std::string>();
    record.prediction = json.at("prediction").get<std::string>();
    record.verdict.kind =
        ParseVerdictName(json.at("verdict").get<std::string>());
    if (json.contains("matcher_index")) {
      record.verdict.matcher_index = json["matcher_index"].get<std::size_t>();
    }
    if (json.contains("variant_features")) {
      record.verdict.variant_features =
          json["variant_features"].get<std::string>();
    }
    if (json.contains("error")) record.error = json["error"].get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("malformed record: ") + e.what());
  }
  return record;
}

std::vector<CaseRecord> RecordsFromJsonl(std::string_view text) {
  std::vector<CaseRecord> records;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      records.push_back(RecordFromJson(
          ParseJsonStrict(line, "record line " + std::to_string(line_no))));
    } catch (const Error& e) {
      throw Error(ErrorCode::kValidation,
                  "record line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

EvalResult EvaluateSuite(const std::vector<TestCase>& suite,
                         ModelClient& client, const EvalOptions& options) {
  CheckDecoding(options.decoding);
  if (options.parallelism < 1) {
    throw Error(ErrorCode::kUsage, "parallelism must be at least 1");
  }
  if (options.attempts < 1) {
    throw Error(ErrorCode::kUsage, "attempts must be at least 1");
  }
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (suite[i].index != i) {
      throw Error(ErrorCode::kValidation,
                  "suite line " + std::to_string(i + 1) + " has index " +
                      std::to_string(suite[i].index));
    }
    LabelsFor(options.labels, suite[i].language);
  }
  const std::string client_id = client.Id();
  const std::string mode(PromptModeName(options.mode));

  // Prompts are built up front so that usage errors surface before any
  // request is sent.
  std::vector<std::string> prompts(suite.size());
  std::vector<std::optional<std::size_t>> exemplars(suite.size());
  for (const TestCase& tc : suite) {
    const TestCase* exemplar = nullptr;
    if (options.mode == PromptMode::kOne) {
      exemplar = &PickExemplar(suite, tc, options.seed);
      exemplars[tc.index] = exemplar->index;
    }
    prompts[tc.index] = BuildPrompt(tc, options.mode, exemplar,
                                    LabelsFor(options.labels, tc.language));
  }

  std::vector<std::optional<CaseRecord>> slots(suite.size());
  if (options.journal && std::filesystem::exists(*options.journal)) {
    for (CaseRecord& record : ReadJournal(*options.journal)) {
      if (record.index >= suite.size() ||
          record.template_id != suite[record.index].template_id ||
          record.client != client_id || record.mode != mode ||
          record.prompt != prompts[record.index]) {
        throw Error(ErrorCode::kValidation,
                    "journal " + options.journal->string() +
                        " does not belong to this run (record " +
                        std::to_string(record.index) + ")");
      }
      // Cases that failed in transport are asked again.
      if (record.error) {
        slots[record.index].reset();
      } else {
        slots[record.index] = std::move(record);
      }
    }
  }
  std::unique_ptr<Journal> journal;
  if (options.journal) journal = std::make_unique<Journal>(*options.journal);

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (!slots[i]) pending.push_back(i);
  }

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure) return;
      }
      const TestCase& tc = suite[pending[k]];
      CaseRecord record;
      record.index = tc.index;
      record.template_id = tc.template_id;
      record.language = tc.language;
      record.client = client_id;
      record.mode = mode;
      record.exemplar_index = exemplars[tc.index];
      record.prompt = prompts[tc.index];
      try {
        ModelRequest request{record.prompt, options.decoding, &tc};
        std::optional<std::string> prediction;
        std::string last_error;
        for (int attempt = 0; attempt < options.attempts; ++attempt) {
          try {
            prediction = client.Complete(request);
            break;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::kTransport) throw;
            last_error = e.what();
            if (attempt + 1 < options.attempts) {
              std::this_thread::sleep_for(options.base_delay * (1 << attempt));
            }
          }
        }
        if (prediction) {
          record.prediction = *prediction;
          record.verdict = Judge(*prediction, tc.matchers);
        } else {
          record.verdict = Verdict{};
          record.error = last_error;
        }
        if (journal) journal->Append(record);
        slots[tc.index] = std::move(record);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const int threads = std::min<int>(
      options.parallelism, static_cast<int>(std::max<std::size_t>(
                               pending.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& thread : pool) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  EvalResult result;
  for (auto& slot : slots) {
    if (slot->error) ++result.transport_errors;
    result.records.push_back(std::move(*slot));
  }
  result.report = BuildReport(result.records);
  if (options.journal) {
    std::string text;
    for (const CaseRecord& record : result.records) {
      text += RecordToJson(record).dump() + "\n";
    }
    journal.reset();
    std::filesystem::path tmp = *options.journal;
    tmp += ".tmp";
    WriteFile(tmp, text);
    std::filesystem::rename(tmp, *options.journal);
  }
  return result;
}

}  // namespace m2c
