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

// Accuracy tables over evaluation records.

#ifndef M2C_REPORT_H_
#define M2C_REPORT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "m2c/json_util.h"

namespace m2c {

struct CaseRecord;

struct ReportRow {
  std::string template_id;
  std::string language;
  std::string client;
  std::string mode;
  std::size_t n = 0;
  std::size_t correct = 0;
  std::size_t morphological = 0;
  std::size_t incorrect = 0;
  std::size_t transport_errors = 0;  // included in `incorrect`

  double Accuracy() const;
  double MorphFraction() const;
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct LanguageAverage {
  std::string language;
  std::size_t rows = 0;
  double accuracy = 0;
};

// Rows sorted by (language, template, client, mode).
struct EvalReport {
  std::vector<ReportRow> rows;

  std::vector<LanguageAverage> LanguageAverages() const;
  // Mean of the language averages.
  double OverallAccuracy() const;
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

enum class ReportFormat { kMarkdown, kCsv, kJson };
ReportFormat ParseReportFormat(std::string_view name);

EvalReport BuildReport(const std::vector<CaseRecord>& records);
// Concatenates rows; two rows with the same key are summed.
EvalReport MergeReports(const std::vector<EvalReport>& reports);

std::string EmitReport(const EvalReport& report, ReportFormat format);
// CSV and JSON only; throws Error(kValidation) on a schema mismatch.
EvalReport ParseReport(std::string_view text, ReportFormat format);

// Percentage with one decimal.
std::string Percent(double fraction);

}  // namespace m2c

#endif  // M2C_REPORT_H_
