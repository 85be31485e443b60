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

// Builtin and remote ModelClient implementations.

#ifndef M2C_MODEL_CLIENTS_H_
#define M2C_MODEL_CLIENTS_H_

#include <chrono>
#include <memory>
#include <string>

#include "m2c/harness.h"

namespace m2c {

// Returns the gold answer of the request's test case.
std::unique_ptr<ModelClient> MakeOracleClient();
// Returns a variant of the GoldForm entry that the judge classifies as a
// morphological error, or "???" when the case has none.
std::unique_ptr<ModelClient> MakeMorphMockClient();
// Always returns "???".
std::unique_ptr<ModelClient> MakeGarbageMockClient();

// POST {prompt, temperature, max_steps} -> {text}. Sends a bearer token
// when M2C_API_KEY is set.
std::unique_ptr<ModelClient> MakeHttpClient(const std::string& endpoint,
                                            std::chrono::milliseconds timeout);

// Spawns `/bin/sh -c command` once and exchanges one JSON line per request
// over its stdin/stdout. Requests are serialized.
std::unique_ptr<ModelClient> MakeSubprocessClient(
    const std::string& command, std::chrono::milliseconds timeout);

}  // namespace m2c

#endif  // M2C_MODEL_CLIENTS_H_
