// Copyright 2026 The Statewalk Authors
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

/**
 * @file
 * Configuration parsing, validation, and output emission for the command-
 * line front end. Validation is strict: unknown keys are rejected, every
 * parameter is checked against the module preconditions before any
 * computation starts, and no output file is written on validation failure.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "statewalk/scenarios.hpp"

namespace statewalk::cli {

using ScenarioConfig =
    std::variant<scenarios::BornConfig, scenarios::DoubleSlitConfig, scenarios::BoxEscapeConfig,
                 scenarios::EprConfig, scenarios::ProductPersistenceConfig,
                 scenarios::NewtonianConfig, scenarios::DriftConfig>;

/// Command-line values that take precedence over the config document.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> trials;
    std::optional<int> threads;
    std::optional<double> epsilon;
    std::optional<double> dt;
    std::optional<double> gue_scale;
    std::optional<std::int64_t> max_steps;
};

struct RunConfig {
    std::string scenario;
    std::uint64_t seed;
    std::string out_dir;
    int threads;
    ScenarioConfig config;
    nlohmann::json effective;  // echoed verbatim into every output
};

/// Builds the effective configuration: scenario defaults, then the document,
/// then command-line overrides. Throws ValidationError naming the offending
/// key on unknown keys, type mismatches, or precondition violations.
RunConfig parse_and_validate(const std::string &scenario, const nlohmann::json &document,
                             const Overrides &overrides);

/// Dispatches to the scenario run.
scenarios::ScenarioReport run(const RunConfig &config);

/// Writes summary.json, trials.csv (and trials_b.csv for two-run scenarios),
/// and one CSV per report table into out_dir. Numbers are serialized with 17
/// significant digits. Returns the list of file paths written.
std::vector<std::string> emit(const scenarios::ScenarioReport &report, const RunConfig &config,
                              const std::string &out_dir);

}  // namespace statewalk::cli
