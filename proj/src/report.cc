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

#include "m2c/report.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <tuple>

#include "m2c/error.h"
#include "m2c/harness.h"

namespace m2c {
namespace {

constexpr const char* kCsvHeader[] = {
    "template_id", "language",        "client",    "mode",
    "n",           "correct",         "morphological_error",
    "incorrect",   "transport_errors", "accuracy", "morph_fraction"};

auto Key(const ReportRow& row) {
  return std::tie(row.language, row.template_id, row.client, row.mode);
}

void SortRows(std::vector<ReportRow>& rows) {
  std::sort(rows.begin(), rows.end(),
            [](const ReportRow& a, const ReportRow& b) {
              return Key(a) < Key(b);
            });
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kValidation, "unterminated CSV quote");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t ParseCount(const std::string& text, std::string_view what) {
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (text.empty() || pos != text.size() || text[0] == '-') {
    throw Error(ErrorCode::kValidation, "report field " + std::string(what) +
                                            " is not a count: '" + text + "'");
  }
  return static_cast<std::size_t>(value);
}

void CheckRow(const ReportRow& row) {
  if (row.correct + row.morphological + row.incorrect != row.n ||
      row.transport_errors > row.incorrect) {
    throw Error(ErrorCode::kValidation,
                "inconsistent counts in report row for '" + row.template_id +
                    "'");
  }
}

}  // namespace

double ReportRow::Accuracy() const {
  return n == 0 ? 0.0 : static_cast<double>(correct) / n;
}

double ReportRow::MorphFraction() const {
  std::size_t wrong = morphological + incorrect;
  return wrong == 0 ? 0.0 : static_cast<double>(morphological) / wrong;
}

std::vector<LanguageAverage> EvalReport::LanguageAverages() const {
  std::map<std::string, LanguageAverage> by_language;
  for (const ReportRow& row : rows) {
    LanguageAverage& avg = by_language[row.language];
    avg.language = row.language;
    avg.accuracy += row.Accuracy();
    ++avg.rows;
  }
  std::vector<LanguageAverage> out;
  for (auto& [_, avg] : by_language) {
    avg.accuracy /= static_cast<double>(avg.rows);
    out.push_back(avg);
  }
  return out;
}

double EvalReport::OverallAccuracy() const {
  std::vector<LanguageAverage> averages = LanguageAverages();
  if (averages.empty()) return 0.0;
  double sum = 0;
  for (const LanguageAverage& avg : averages) sum += avg.accuracy;
  return sum / static_cast<double>(averages.size());
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw Error(ErrorCode::kUsage,
              "unknown report format '" + std::string(name) + "'");
}

EvalReport BuildReport(const std::vector<CaseRecord>& records) {
  std::map<std::tuple<std::string, std::string, std::string, std::string>,
           ReportRow>
      rows;
  for (const CaseRecord& record : records) {
    ReportRow& row = rows[{record.language, record.template_id, record.client,
                           record.mode}];
    row.template_id = record.template_id;
    row.language = record.language;
    row.client = record.client;
    row.mode = record.mode;
    ++row.n;
    switch (record.verdict.kind) {
      case VerdictKind::kCorrect:
        ++row.correct;
        break;
      case VerdictKind::kMorphologicalError:
        ++row.morphological;
        break;
      case VerdictKind::kIncorrect:
        ++row.incorrect;
        break;
    }
    if (record.error) ++row.transport_errors;
  }
  EvalReport report;
  for (auto& [_, row] : rows) report.rows.push_back(std::move(row));
  return report;
}

EvalReport MergeReports(const std::vector<EvalReport>& reports) {
  std::vector<ReportRow> merged;
  for (const EvalReport& report : reports) {
    for (const ReportRow& row : report.rows) {
      auto it = std::find_if(merged.begin(), merged.end(),
                             [&](const ReportRow& m) {
                               return Key(m) == Key(row);
                             });
      if (it == merged.end()) {
        merged.push_back(row);
        continue;
      }
      it->n += row.n;
      it->correct += row.correct;
      it->morphological += row.morphological;
      it->incorrect += row.incorrect;
      it->transport_errors += row.transport_errors;
    }
  }
  SortRows(merged);
  return EvalReport{std::move(merged)};
}

std::string Percent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.1f", fraction * 100.0);
  return buffer;
}

std::string EmitReport(const EvalReport& report, ReportFormat format) {
  std::string out;
  switch (format) {
    case ReportFormat::kMarkdown: {
      out += "| Template | Language | Client | Mode | n | Accuracy (%) | "
             "Morph. errors (%) | Transport errors |\n";
      out += "|---|---|---|---|---:|---:|---:|---:|\n";
      for (const ReportRow& row : report.rows) {
        out += "| " + row.template_id + " | " + row.language + " | " +
               row.client + " | " + row.mode + " | " +
               std::to_string(row.n) + " | " + Percent(row.Accuracy()) +
               " | " + Percent(row.MorphFraction()) + " | " +
               std::to_string(row.transport_errors) + " |\n";
      }
      out += "\n| Language | Templates | Accuracy (%) |\n|---|---:|---:|\n";
      for (const LanguageAverage& avg : report.LanguageAverages()) {
        out += "| " + avg.language + " | " + std::to_string(avg.rows) +
               " | " + Percent(avg.accuracy) + " |\n";
      }
      out += "| Avg. | | " + Percent(report.OverallAccuracy()) + " |\n";
      break;
    }
    case ReportFormat::kCsv: {
      for (std::size_t i = 0; i < std::size(kCsvHeader); ++i) {
        out += (i ? "," : "");
        out += kCsvHeader[i];
      }
      out += '\n';
      for (const ReportRow& row : report.rows) {
        out += CsvField(row.template_id) + "," + CsvField(row.language) + "," +
               CsvField(row.client) + "," + CsvField(row.mode) + "," +
               std::to_string(row.n) + "," + std::to_string(row.correct) +
               "," + std::to_string(row.morphological) + "," +
               std::to_string(row.incorrect) + "," +
               std::to_string(row.transport_errors) + "," +
               Percent(row.Accuracy()) + "," + Percent(row.MorphFraction()) +
               "\n";
      }
      break;
    }
    case ReportFormat::kJson: {
      Json json = Json::object();
      Json rows = Json::array();
      for (const ReportRow& row : report.rows) {
        rows.push_back(Json{{"template_id", row.template_id},
                            {"language", row.language},
                            {"client", row.client},
                            {"mode", row.mode},
                            {"n", row.n},
                            {"correct", row.correct},
                            {"morphological_error", row.morphological},
                            {"incorrect", row.incorrect},
                            {"transport_errors", row.transport_errors},
                            {"accuracy", Percent(row.Accuracy())},
                            {"morph_fraction", Percent(row.MorphFraction())}});
      }
      json["rows"] = std::move(rows);
      Json languages = Json::object();
      for (const LanguageAverage& avg : report.LanguageAverages()) {
        languages[avg.language] = Percent(avg.accuracy);
      }
      json["languages"] = std::move(languages);
      json["overall"] = Percent(report.OverallAccuracy());
      out = json.dump(2) + "\n";
      break;
    }
  }
  return out;
}

EvalReport ParseReport(std::string_view text, ReportFormat format) {
  EvalReport report;
  if (format == ReportFormat::kCsv) {
    auto rows = ParseCsv(text);
    if (rows.empty() ||
        rows[0] != std::vector<std::string>(std::begin(kCsvHeader),
                                            std::end(kCsvHeader))) {
      throw Error(ErrorCode::kValidation, "CSV report header mismatch");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& f = rows[i];
      if (f.size() != std::size(kCsvHeader)) {
        throw Error(ErrorCode::kValidation,
                    "CSV report row " + std::to_string(i) +
                        " has the wrong number of fields");
      }
      ReportRow row{f[0],
                    f[1],
                    f[2],
                    f[3],
                    ParseCount(f[4], "n"),
                    ParseCount(f[5], "correct"),
                    ParseCount(f[6], "morphological_error"),
                    ParseCount(f[7], "incorrect"),
                    ParseCount(f[8], "transport_errors")};
      CheckRow(row);
      report.rows.push_back(std::move(row));
    }
  } else if (format == ReportFormat::kJson) {
    Json json = ParseJsonStrict(text, "report");
    try {
      for (const Json& r : json.at("rows")) {
        ReportRow row{r.at("template_id").get<std::string>(),
                      r.at("language").get<std::string>(),
                      r.at("client").get<std::string>(),
                      r.at("mode").get<std::string>(),
                      r.at("n").get<std::size_t>(),
                      r.at("correct").get<std::size_t>(),
                      r.at("morphological_error").get<std::size_t>(),
                      r.at("incorrect").get<std::size_t>(),
                      r.at("transport_errors").get<std::size_t>()};
        CheckRow(row);
        report.rows.push_back(std::move(row));
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kValidation,
                  std::string("malformed JSON report: ") + e.what());
    }
  } else {
    throw Error(ErrorCode::kUsage, "markdown reports cannot be read back");
  }
  SortRows(report.rows);
  return report;
}

}  // namespace m2c
