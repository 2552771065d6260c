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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "statewalk/config.hpp"

using namespace statewalk;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("parse_and_validate: defaults fill a minimal document") {
    const auto config = cli::parse_and_validate("born", json::object(), {});
    CHECK(config.scenario == "born");
    CHECK(config.out_dir == "out");
    CHECK(config.threads == 0);
    const auto &born = std::get<scenarios::BornConfig>(config.config);
    CHECK(born.weights.size() == 2);
    CHECK(born.walk.epsilon == doctest::Approx(0.15));
    CHECK(born.walk.max_steps == 1000000);
    CHECK(config.effective.contains("weights"));
    CHECK(config.effective["walk"]["epsilon"] == 0.15);
}

TEST_CASE("parse_and_validate: errors name the offending key") {
    const json bad_eps{{"walk", {{"epsilon", -0.1}}}};
    CHECK_THROWS_WITH_AS(cli::parse_and_validate("born", bad_eps, {}),
                         doctest::Contains("epsilon"), ValidationError);

    const json unknown{{"walkk", 3}};
    CHECK_THROWS_WITH_AS(cli::parse_and_validate("born", unknown, {}),
                         doctest::Contains("walkk"), ValidationError);

    const json nested_unknown{{"walk", {{"dt", 0.01}, {"dtt", 0.01}}}};
    CHECK_THROWS_WITH_AS(cli::parse_and_validate("born", nested_unknown, {}),
                         doctest::Contains("walk.dtt"), ValidationError);

    const json bad_type{{"seed", "not-a-number"}};
    CHECK_THROWS_WITH_AS(cli::parse_and_validate("born", bad_type, {}),
                         doctest::Contains("seed"), ValidationError);

    const json wrong_scenario{{"scenario", "epr"}};
    CHECK_THROWS_AS(cli::parse_and_validate("born", wrong_scenario, {}), ValidationError);

    const json bad_weights{{"weights", {0.5, 0.6}}};
    CHECK_THROWS_WITH_AS(cli::parse_and_validate("born", bad_weights, {}),
                         doctest::Contains("weights"), ValidationError);
}

TEST_CASE("parse_and_validate: command-line overrides win over the document") {
    const json document{{"seed", 7}};
    cli::Overrides overrides;
    overrides.seed = 42;
    overrides.trials = 5;
    const auto config = cli::parse_and_validate("born", document, overrides);
    CHECK(config.seed == 42);
    CHECK(config.effective["seed"] == 42);
    CHECK(std::get<scenarios::BornConfig>(config.config).walk.trials == 5);
}

TEST_CASE("parse_and_validate: round-trips its own effective configuration") {
    for (const std::string scenario :
         {"born", "double-slit", "box-escape", "epr", "cat", "newton", "drift"}) {
        const auto first = cli::parse_and_validate(scenario, json::object(), {});
        const auto second = cli::parse_and_validate(scenario, first.effective, {});
        CHECK(second.effective == first.effective);
    }
}

TEST_CASE("emit: trial CSV schema, determinism, and empty sets") {
    const auto temp =
        std::filesystem::temp_directory_path() / "statewalk_test_emit";
    std::filesystem::remove_all(temp);

    cli::Overrides overrides;
    overrides.trials = 20;
    overrides.out_dir = (temp / "a").string();
    const json document{{"weights", {0.5, 0.5}},
                        {"walk", {{"dt", 0.02}, {"max_steps", 200000}}}};
    const auto config = cli::parse_and_validate("born", document, overrides);
    const auto report = cli::run(config);
    cli::emit(report, config, (temp / "a").string());
    cli::emit(report, config, (temp / "b").string());

    const std::string csv_a = slurp(temp / "a" / "trials.csv");
    CHECK(csv_a.rfind("trial_id,outcome,steps,final_distance\n", 0) == 0);
    CHECK(csv_a == slurp(temp / "b" / "trials.csv"));

    // Re-running the scenario from the same effective config is byte-identical.
    const auto config2 = cli::parse_and_validate("born", config.effective, {});
    const auto report2 = cli::run(config2);
    cli::emit(report2, config2, (temp / "c").string());
    CHECK(csv_a == slurp(temp / "c" / "trials.csv"));
    CHECK(slurp(temp / "a" / "summary.json") == slurp(temp / "c" / "summary.json"));

    // An empty trial set still yields the header row.
    scenarios::ScenarioReport empty;
    empty.scenario = "born";
    empty.trials = measure::TrialStats{};
    cli::emit(empty, config, (temp / "empty").string());
    CHECK(slurp(temp / "empty" / "trials.csv") == "trial_id,outcome,steps,final_distance\n");

    std::filesystem::remove_all(temp);
}

TEST_CASE("emit: single hit trial writes one data row with the target index") {
    const auto temp =
        std::filesystem::temp_directory_path() / "statewalk_test_emit_one";
    std::filesystem::remove_all(temp);

    const auto detectors = measure::DetectorSet::full_basis(2, 0.15);
    StateVector e2(2);
    e2 << 0.0, 1.0;
    dynamics::StepConfig cfg;
    cfg.dt = 0.02;
    scenarios::ScenarioReport report;
    report.scenario = "born";
    report.trials = measure::run_trials(1, Ray(e2), detectors, cfg, 3, 10, 1);

    const auto config = cli::parse_and_validate("born", json::object(), {});
    cli::emit(report, config, temp.string());
    const std::string csv = slurp(temp / "trials.csv");
    CHECK(csv == "trial_id,outcome,steps,final_distance\n0,1,0,0\n");
    std::filesystem::remove_all(temp);
}
