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

#include "m2c/error.h"

namespace m2c {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kUnknownDimension: return "UnknownDimension";
    case ErrorCode::kFeatureConflict: return "FeatureConflict";
    case ErrorCode::kLexicon: return "LexiconError";
    case ErrorCode::kMissingInflection: return "MissingInflection";
    case ErrorCode::kAmbiguousInflection: return "AmbiguousInflection";
    case ErrorCode::kUnresolvedDimension: return "UnresolvedDimension";
    case ErrorCode::kTemplate: return "TemplateError";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kCyclicDependence: return "CyclicDependence";
    case ErrorCode::kNoGuardFired: return "NoGuardFired";
    case ErrorCode::kUnknownFunction: return "UnknownFunction";
    case ErrorCode::kMissingNumeric: return "MissingNumeric";
    case ErrorCode::kResultNotInLexicon: return "ResultNotInLexicon";
    case ErrorCode::kGeneration: return "GenerationError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kUsage: return "UsageError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kTransport: return "TransportError";
  }
  return "Error";
}

}  // namespace m2c
