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

#include "m2c/cli.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "m2c/assets.h"
#include "m2c/error.h"
#include "m2c/expander.h"
#include "m2c/harness.h"
#include "m2c/json_util.h"
#include "m2c/report.h"

namespace m2c {
namespace {

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kTransport:
      return kExitTransport;
    default:
      return kExitValidation;
  }
}

std::string UtcNow() {
  std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

Json FileEntry(const std::string& role, const std::filesystem::path& path) {
  return Json{{"role", role},
              {"path", path.string()},
              {"sha256", Sha256Hex(ReadFile(path))}};
}

struct Manifest {
  Json json = Json::object();

  Manifest(const std::string& command, const std::vector<std::string>& args) {
    json["tool"] = "m2c";
    json["version"] = M2C_VERSION;
    json["command"] = command;
    json["arguments"] = args;
    json["started"] = UtcNow();
    json["inputs"] = Json::array();
  }
  void Input(const std::string& role, const std::filesystem::path& path) {
    if (!path.empty()) json["inputs"].push_back(FileEntry(role, path));
  }
  void WriteFor(const std::filesystem::path& output) {
    json["finished"] = UtcNow();
    json["output"] = FileEntry("output", output);
    std::filesystem::path path = output;
    path += ".manifest.json";
    WriteFile(path, json.dump(2) + "\n");
  }
};

struct AssetFlags {
  std::vector<std::string> packs;
  std::string schema;
  std::string lexicon;
  std::string templates;

  void Register(CLI::App* app) {
    app->add_option("--pack", packs,
                    "Asset prefix such as assets/it/spatial (repeatable)");
    app->add_option("--schema", schema, "Schema extension JSON");
    app->add_option("--lexicon", lexicon, "Lexicon JSON");
    app->add_option("--templates", templates, "Template set JSON");
  }

  std::vector<AssetPaths> Resolve() const {
    std::vector<AssetPaths> out;
    for (const std::string& pack : packs) out.push_back(PackPaths(pack));
    if (!lexicon.empty() || !templates.empty() || !schema.empty()) {
      if (lexicon.empty() || templates.empty()) {
        throw Error(ErrorCode::kUsage,
                    "--lexicon and --templates must be given together");
      }
      out.push_back(AssetPaths{schema, lexicon, templates});
    }
    if (out.empty()) {
      throw Error(ErrorCode::kUsage,
                  "no assets given; use --pack or --lexicon/--templates");
    }
    return out;
  }
};

int Check(const AssetFlags& flags, std::ostream& out, std::ostream& err) {
  int status = kExitOk;
  for (const AssetPaths& paths : flags.Resolve()) {
    AssetPack pack;
    try {
      pack = LoadAssetPack(paths);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      if (e.code() == ErrorCode::kIo) return kExitIo;
      status = kExitValidation;
      continue;
    }
    try {
      SuiteResult trial = GenerateSuite(pack.set, pack.lexicon, pack.schema,
                                        2000, 0);
      for (const std::string& d : trial.diagnostics) {
        err << "warning: " << pack.set.id << ": " << d << "\n";
      }
      out << pack.set.id << ": ok (" << trial.total_bindings
          << " bindings, " << trial.cases.size() << " rendered)\n";
    } catch (const Error& e) {
      err << "error: " << paths.templates.string() << ": " << e.what()
          << "\n";
      status = kExitValidation;
    }
  }
  return status;
}

int Expand(const AssetFlags& flags, std::size_t n, std::uint64_t seed,
           const std::string& output, const std::vector<std::string>& args,
           std::ostream& out) {
  Manifest manifest("expand", args);
  std::vector<TestCase> suite;
  for (const AssetPaths& paths : flags.Resolve()) {
    AssetPack pack = LoadAssetPack(paths);
    manifest.Input("schema", paths.schema);
    manifest.Input("lexicon", paths.lexicon);
    manifest.Input("templates", paths.templates);
    SuiteResult result = GenerateSuite(pack.set, pack.lexicon, pack.schema, n,
                                       seed);
    for (TestCase& tc : result.cases) {
      tc.index = suite.size();
      suite.push_back(std::move(tc));
    }
    out << pack.set.id << ": " << result.cases.size() << " of "
        << result.total_bindings << " bindings\n";
  }
  WriteFile(output, SuiteToJsonl(suite));
  manifest.json["seed"] = seed;
  manifest.json["n"] = n;
  manifest.WriteFor(output);
  return kExitOk;
}

struct EvaluateFlags {
  std::string suite;
  std::string client = "oracle";
  std::string mode = "zero";
  int parallelism = 1;
  std::string output;
  std::string endpoint;
  std::string command;
  std::string labels;
  std::uint64_t seed = 0;
  double temperature = 0.0;
  int max_steps = 20;
  int retry_delay_ms = 200;
  int timeout_ms = 60000;
  std::string format = "markdown";
};

int Evaluate(const EvaluateFlags& flags, const std::vector<std::string>& args,
             std::ostream& out, std::ostream& err) {
  Manifest manifest("evaluate", args);
  std::vector<TestCase> suite = SuiteFromJsonl(ReadFile(flags.suite));
  manifest.Input("suite", flags.suite);
  EvalOptions options;
  options.mode = ParsePromptMode(flags.mode);
  options.parallelism = flags.parallelism;
  options.seed = flags.seed;
  options.decoding = DecodingConfig{flags.temperature, flags.max_steps};
  options.base_delay = std::chrono::milliseconds(flags.retry_delay_ms);
  if (!flags.labels.empty()) {
    options.labels = LoadPromptLabels(
        ParseJsonStrict(ReadFile(flags.labels), flags.labels));
    manifest.Input("labels", flags.labels);
  }
  if (!flags.output.empty()) options.journal = flags.output;
  ClientOptions client_options{flags.endpoint, flags.command,
                               std::chrono::milliseconds(flags.timeout_ms)};
  std::unique_ptr<ModelClient> client =
      MakeClient(flags.client, client_options);
  EvalResult result = EvaluateSuite(suite, *client, options);
  out << EmitReport(result.report, ParseReportFormat(flags.format));
  if (!flags.output.empty()) {
    manifest.json["seed"] = flags.seed;
    manifest.json["mode"] = flags.mode;
    manifest.json["client"] = client->Id();
    manifest.json["decoding"] = {{"temperature", flags.temperature},
                                 {"max_steps", flags.max_steps}};
    manifest.json["transport_errors"] = result.transport_errors;
    manifest.WriteFor(flags.output);
  }
  if (result.transport_errors > 0) {
    err << "error: " << result.transport_errors
        << " cases failed in transport after retries\n";
    return kExitTransport;
  }
  return kExitOk;
}

EvalReport ReadReportInput(const std::string& path) {
  std::string text = ReadFile(path);
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           std::string_view(path).substr(path.size() - suffix.size()) ==
               suffix;
  };
  if (ends_with(".csv")) return ParseReport(text, ReportFormat::kCsv);
  if (ends_with(".json")) return ParseReport(text, ReportFormat::kJson);
  return BuildReport(RecordsFromJsonl(text));
}

int Report(const std::vector<std::string>& inputs, const std::string& format,
           const std::string& output, const std::vector<std::string>& args,
           std::ostream& out) {
  std::vector<EvalReport> reports;
  for (const std::string& input : inputs) {
    try {
      reports.push_back(ReadReportInput(input));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIo) throw;
      throw Error(e.code(), input + ": " + e.what());
    }
  }
  std::string text = EmitReport(MergeReports(reports),
                                ParseReportFormat(format));
  if (output.empty()) {
    out << text;
    return kExitOk;
  }
  Manifest manifest("report", args);
  for (const std::string& input : inputs) manifest.Input("records", input);
  manifest.json["format"] = format;
  WriteFile(output, text);
  manifest.WriteFor(output);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Morphology-aware behavioral tests for question answering",
               "m2c"};
  app.set_version_flag("--version", std::string(M2C_VERSION));
  app.require_subcommand(1);

  AssetFlags check_flags;
  CLI::App* check = app.add_subcommand("check", "Validate asset files");
  check_flags.Register(check);

  AssetFlags expand_flags;
  std::size_t n = 2000;
  std::uint64_t seed = 0;
  std::string expand_output;
  CLI::App* expand = app.add_subcommand("expand", "Generate a test suite");
  expand_flags.Register(expand);
  expand->add_option("-n", n, "Cases per template")
      ->check(CLI::PositiveNumber);
  expand->add_option("--seed", seed, "Sampling seed");
  expand->add_option("-o,--output", expand_output, "Suite JSONL")->required();

  EvaluateFlags eval_flags;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Run a model on a suite");
  evaluate->add_option("suite", eval_flags.suite, "Suite JSONL")->required();
  evaluate->add_option("--client", eval_flags.client,
                       "oracle, http, subprocess, mock:morph or mock:garbage");
  evaluate->add_option("--mode", eval_flags.mode, "zero or one")
      ->check(CLI::IsMember({"zero", "one"}));
  evaluate->add_option("--parallelism", eval_flags.parallelism)
      ->check(CLI::PositiveNumber);
  evaluate->add_option("-o,--output", eval_flags.output,
                       "Per-case records JSONL (also the resume journal)");
  evaluate->add_option("--endpoint", eval_flags.endpoint, "HTTP endpoint");
  evaluate->add_option("--command", eval_flags.command,
                       "Model process for the subprocess client");
  evaluate->add_option("--labels", eval_flags.labels, "Prompt labels JSON");
  evaluate->add_option("--seed", eval_flags.seed, "Exemplar seed");
  evaluate->add_option("--temperature", eval_flags.temperature);
  evaluate->add_option("--max-steps", eval_flags.max_steps);
  evaluate->add_option("--retry-delay-ms", eval_flags.retry_delay_ms);
  evaluate->add_option("--timeout-ms", eval_flags.timeout_ms);
  evaluate->add_option("--format", eval_flags.format,
                       "Report format printed to stdout");

  std::vector<std::string> report_inputs;
  std::string report_format = "markdown";
  std::string report_output;
  CLI::App* report = app.add_subcommand("report", "Tabulate records");
  report->add_option("inputs", report_inputs,
                     "Records JSONL, or reports in .csv/.json")
      ->required();
  report->add_option("--format", report_format, "markdown, csv or json");
  report->add_option("-o,--output", report_output, "Output file");

  std::vector<std::string> argv_storage;
  argv_storage.push_back("m2c");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& arg : argv_storage) argv.push_back(arg.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*check) return Check(check_flags, out, err);
    if (*expand) {
      return Expand(expand_flags, n, seed, expand_output, args, out);
    }
    if (*evaluate) return Evaluate(eval_flags, args, out, err);
    if (*report) {
      return Report(report_inputs, report_format, report_output, args, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace m2c
