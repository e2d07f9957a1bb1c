// Copyright 2026 The tlsbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "json.hpp"
#include "tlsbayes/harness.hpp"

namespace tlsbayes {

inline constexpr int kSchemaVersion = 1;

// JSON configuration in human units (MHz, us). Missing keys keep their
// defaults; unknown keys are rejected. Throws ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Complete configuration, every field present. Parsing the result gives
// back a RunConfig that is bit-identical to `cfg` when its angular ranges
// were themselves converted from MHz.
nlohmann::json to_json(const RunConfig& cfg);

// MHz value whose angular conversion reproduces `w` exactly. Such a value
// exists whenever `w` itself came from an MHz number; otherwise the nearest
// conversion is returned.
double angular_to_mhz_exact(double w);

const char* to_string(ResampleMode mode);
const char* to_string(ErrorNormalization normalization);
const char* to_string(FrequencyFallback fallback);

}  // namespace tlsbayes
