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

#include "statewalk/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace statewalk::cli {

namespace {

using nlohmann::json;

/// Strict reader over a JSON object: consumed keys are erased, leftovers are
/// unknown keys and rejected. Error messages carry the dotted key path.
class Reader {
  public:
    Reader(const json &object, std::string path) : remaining_(object), path_(std::move(path)) {
        if (!remaining_.is_object()) {
            throw ValidationError(path_ + ": expected an object");
        }
    }

    std::string key_path(const std::string &key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    void read_double(const std::string &key, double &field) {
        auto it = remaining_.find(key);
        if (it == remaining_.end()) {
            return;
        }
        if (!it->is_number()) {
            throw ValidationError(key_path(key) + ": expected a number");
        }
        field = it->get<double>();
        remaining_.erase(it);
    }

    void read_int(const std::string &key, int &field) {
        auto it = remaining_.find(key);
        if (it == remaining_.end()) {
            return;
        }
        if (!it->is_number_integer()) {
            throw ValidationError(key_path(key) + ": expected an integer");
        }
        field = it->get<int>();
        remaining_.erase(it);
    }

    void read_int64(const std::string &key, std::int64_t &field) {
        auto it = remaining_.find(key);
        if (it == remaining_.end()) {
            return;
        }
        if (!it->is_number_integer()) {
            throw ValidationError(key_path(key) + ": expected an integer");
        }
        field = it->get<std::int64_t>();
        remaining_.erase(it);
    }

    void read_u64(const std::string &key, std::uint64_t &field) {
        auto it = remaining_.find(key);
        if (it == remaining_.end()) {
            return;
        }
        if (!it->is_number_integer() || (it->is_number_integer() && it->get<std::int64_t>() < 0 &&
                                         !it->is_number_unsigned())) {
            throw ValidationError(key_path(key) + ": expected a nonnegative integer");
        }
        field = it->get<std::uint64_t>();
        remaining_.erase(it);
    }

    void read_bool(const std::string &key, bool &field) {
        auto it = remaining_.find(key);
        if (it == remaining_.end()) {
            return;
        }
        if (!it->is_boolean()) {
            throw ValidationError(key_path(key) + ": expected a boolean");
        }
        field = it->get<bool>();
        remaining_.erase(it);
    }

    void read_string(const std::string &key, std::string &field) {
        auto it = remaining_.find(key);
        if (it == remaining_.end()) {
            return;
        }
        if (!it->is_string()) {
            throw ValidationError(key_path(key) + ": expected a string");
        }
        field = it->get<std::string>();
        remaining_.erase(it);
    }

    void read_double_array(const std::string &key, std::vector<double> &field) {
        auto it = remaining_.find(key);
        if (it == remaining_.end()) {
            return;
        }
        if (!it->is_array()) {
            throw ValidationError(key_path(key) + ": expected an array of numbers");
        }
        std::vector<double> values;
        for (const auto &entry : *it) {
            if (!entry.is_number()) {
                throw ValidationError(key_path(key) + ": expected an array of numbers");
            }
            values.push_back(entry.get<double>());
        }
        field = std::move(values);
        remaining_.erase(it);
    }

    std::optional<Reader> child(const std::string &key) {
        auto it = remaining_.find(key);
        if (it == remaining_.end()) {
            return std::nullopt;
        }
        Reader out(*it, key_path(key));
        remaining_.erase(it);
        return out;
    }

    void finish() const {
        if (!remaining_.empty()) {
            throw ValidationError("unknown key \"" + key_path(remaining_.begin().key()) + "\"");
        }
    }

  private:
    json remaining_;
    std::string path_;
};

void require(bool condition, const std::string &key, const std::string &what) {
    if (!condition) {
        throw ValidationError(key + ": " + what);
    }
}

void read_walk(Reader &parent, scenarios::WalkParams &walk) {
    auto child = parent.child("walk");
    if (!child) {
        return;
    }
    child->read_double("dt", walk.dt);
    child->read_double("gue_scale", walk.gue_scale);
    child->read_double("epsilon", walk.epsilon);
    child->read_int64("max_steps", walk.max_steps);
    child->read_int("trials", walk.trials);
    child->finish();
}

void validate_walk(const scenarios::WalkParams &walk, const std::string &prefix) {
    require(walk.dt > 0.0, prefix + ".dt", "must be > 0");
    require(walk.gue_scale > 0.0, prefix + ".gue_scale", "must be > 0");
    require(walk.epsilon > 0.0 && walk.epsilon < 0.314, prefix + ".epsilon",
            "must be in (0, 0.314) so basis detectors stay 5 epsilon apart");
    require(walk.max_steps >= 1, prefix + ".max_steps", "must be >= 1");
    require(walk.trials >= 1, prefix + ".trials", "must be >= 1");
}

struct GridKeys {
    int points;
    double min;
    double max;
};

void read_grid(Reader &parent, const std::string &key, GridKeys &grid) {
    auto child = parent.child(key);
    if (!child) {
        return;
    }
    child->read_int("points", grid.points);
    child->read_double("min", grid.min);
    child->read_double("max", grid.max);
    child->finish();
}

void validate_grid(const GridKeys &grid, const std::string &key) {
    require(grid.points >= 16, key + ".points", "must be >= 16");
    require(grid.max > grid.min, key + ".max", "must exceed " + key + ".min");
}

json walk_to_json(const scenarios::WalkParams &walk) {
    return json{{"dt", walk.dt},
                {"gue_scale", walk.gue_scale},
                {"epsilon", walk.epsilon},
                {"max_steps", walk.max_steps},
                {"trials", walk.trials}};
}

json grid_to_json(int points, double min, double max) {
    return json{{"points", points}, {"min", min}, {"max", max}};
}

// ---- per-scenario parse/serialize ----------------------------------------

scenarios::BornConfig parse_born(Reader &reader) {
    scenarios::BornConfig config;
    reader.read_double_array("weights", config.weights);
    read_walk(reader, config.walk);
    require(config.weights.size() >= 2, "weights", "need at least two entries");
    double sum = 0.0;
    for (double w : config.weights) {
        require(w >= 0.0, "weights", "entries must be nonnegative");
        sum += w;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "weights", "must sum to 1");
    validate_walk(config.walk, "walk");
    return config;
}

json born_to_json(const scenarios::BornConfig &config) {
    return json{{"weights", config.weights}, {"walk", walk_to_json(config.walk)}};
}

scenarios::DoubleSlitConfig parse_double_slit(Reader &reader) {
    scenarios::DoubleSlitConfig config;
    GridKeys grid{config.grid_points, config.grid_min, config.grid_max};
    read_grid(reader, "grid", grid);
    reader.read_double("sigma", config.sigma);
    reader.read_double("slit_separation", config.slit_separation);
    reader.read_double("flight_time", config.flight_time);
    reader.read_int("evolve_steps", config.evolve_steps);
    reader.read_int("plate_sites", config.plate_sites);
    reader.read_int("plate_site_stride", config.plate_site_stride);
    reader.read_bool("single_slit", config.single_slit);
    read_walk(reader, config.walk);
    validate_grid(grid, "grid");
    config.grid_points = grid.points;
    config.grid_min = grid.min;
    config.grid_max = grid.max;
    require(config.sigma > 0.0, "sigma", "must be > 0");
    require(config.slit_separation >= 6.0 * config.sigma, "slit_separation",
            "must be >= 6 sigma");
    require(0.5 * config.slit_separation + 5.0 * config.sigma <= config.grid_max,
            "slit_separation", "slits must stay 5 sigma inside the grid");
    require(config.flight_time > 0.0, "flight_time", "must be > 0");
    require(config.evolve_steps >= 1, "evolve_steps", "must be >= 1");
    require(config.plate_sites >= 2 && config.plate_sites <= 5, "plate_sites",
            "must be in [2, 5] (walk dimensionality)");
    require(config.plate_site_stride >= 1, "plate_site_stride", "must be >= 1");
    validate_walk(config.walk, "walk");
    return config;
}

json double_slit_to_json(const scenarios::DoubleSlitConfig &config) {
    return json{{"grid", grid_to_json(config.grid_points, config.grid_min, config.grid_max)},
                {"sigma", config.sigma},
                {"slit_separation", config.slit_separation},
                {"flight_time", config.flight_time},
                {"evolve_steps", config.evolve_steps},
                {"plate_sites", config.plate_sites},
                {"plate_site_stride", config.plate_site_stride},
                {"single_slit", config.single_slit},
                {"walk", walk_to_json(config.walk)}};
}

scenarios::BoxEscapeConfig parse_box_escape(Reader &reader) {
    scenarios::BoxEscapeConfig config;
    GridKeys grid{config.grid_points, config.grid_min, config.grid_max};
    read_grid(reader, "grid", grid);
    reader.read_double("sigma", config.sigma);
    reader.read_double("far_distance_sigmas", config.far_distance_sigmas);
    reader.read_double("mass", config.mass);
    reader.read_double("t_total", config.t_total);
    reader.read_int("steps", config.steps);
    reader.read_int("record_stride", config.record_stride);
    reader.read_double("approach_threshold", config.approach_threshold);
    validate_grid(grid, "grid");
    config.grid_points = grid.points;
    config.grid_min = grid.min;
    config.grid_max = grid.max;
    require(config.sigma > 0.0, "sigma", "must be > 0");
    require(config.far_distance_sigmas > 0.0, "far_distance_sigmas", "must be > 0");
    require(config.mass > 0.0, "mass", "must be > 0");
    require(config.t_total > 0.0, "t_total", "must be > 0");
    require(config.steps >= 1, "steps", "must be >= 1");
    require(config.record_stride >= 1, "record_stride", "must be >= 1");
    require(config.approach_threshold > 0.0 && config.approach_threshold < 1.5707,
            "approach_threshold", "must be in (0, pi/2)");
    return config;
}

json box_escape_to_json(const scenarios::BoxEscapeConfig &config) {
    return json{{"grid", grid_to_json(config.grid_points, config.grid_min, config.grid_max)},
                {"sigma", config.sigma},
                {"far_distance_sigmas", config.far_distance_sigmas},
                {"mass", config.mass},
                {"t_total", config.t_total},
                {"steps", config.steps},
                {"record_stride", config.record_stride},
                {"approach_threshold", config.approach_threshold}};
}

scenarios::EprConfig parse_epr(Reader &reader) {
    scenarios::EprConfig config;
    GridKeys grid{config.grid_points, config.grid_min, config.grid_max};
    read_grid(reader, "grid", grid);
    reader.read_double("sigma", config.sigma);
    reader.read_double("sigma_delta", config.sigma_delta);
    reader.read_double("pair_offset", config.pair_offset);
    reader.read_int("manifold_samples", config.manifold_samples);
    reader.read_int("walk_targets", config.walk_targets);
    reader.read_double("target_spacing", config.target_spacing);
    reader.read_double("min_momentum_distance", config.min_momentum_distance);
    read_walk(reader, config.walk);
    validate_grid(grid, "grid");
    config.grid_points = grid.points;
    config.grid_min = grid.min;
    config.grid_max = grid.max;
    require(static_cast<long>(config.grid_points) * config.grid_points <= 4096, "grid.points",
            "joint dimension exceeds the 4096 budget");
    require(config.sigma > 0.0, "sigma", "must be > 0");
    require(config.sigma_delta > 0.0, "sigma_delta", "must be > 0");
    const double dx = (config.grid_max - config.grid_min) / config.grid_points;
    require(config.sigma_delta >= dx, "sigma_delta",
            "must be at least one grid spacing to stay resolved");
    require(config.manifold_samples >= 2, "manifold_samples", "must be >= 2");
    require(config.walk_targets >= 2 && config.walk_targets <= 4, "walk_targets",
            "must be in [2, 4] (walk dimensionality)");
    require(config.target_spacing > 0.0, "target_spacing", "must be > 0");
    require(config.min_momentum_distance > 0.0 && config.min_momentum_distance < 1.5708,
            "min_momentum_distance", "must be in (0, pi/2)");
    validate_walk(config.walk, "walk");
    return config;
}

json epr_to_json(const scenarios::EprConfig &config) {
    return json{{"grid", grid_to_json(config.grid_points, config.grid_min, config.grid_max)},
                {"sigma", config.sigma},
                {"sigma_delta", config.sigma_delta},
                {"pair_offset", config.pair_offset},
                {"manifold_samples", config.manifold_samples},
                {"walk_targets", config.walk_targets},
                {"target_spacing", config.target_spacing},
                {"min_momentum_distance", config.min_momentum_distance},
                {"walk", walk_to_json(config.walk)}};
}

scenarios::ProductPersistenceConfig parse_cat(Reader &reader) {
    scenarios::ProductPersistenceConfig config;
    GridKeys particle{config.particle_points, config.particle_min, config.particle_max};
    GridKeys device{config.device_points, config.device_min, config.device_max};
    read_grid(reader, "particle_grid", particle);
    read_grid(reader, "device_grid", device);
    reader.read_double("particle_sigma", config.particle_sigma);
    reader.read_double("device_sigma", config.device_sigma);
    reader.read_double("particle_mass", config.particle_mass);
    reader.read_double("device_mass", config.device_mass);
    reader.read_double("coupling", config.coupling);
    reader.read_double("dt", config.dt);
    reader.read_int("steps", config.steps);
    reader.read_double("entropy_low", config.entropy_low);
    reader.read_double("entropy_high", config.entropy_high);
    validate_grid(particle, "particle_grid");
    validate_grid(device, "device_grid");
    config.particle_points = particle.points;
    config.particle_min = particle.min;
    config.particle_max = particle.max;
    config.device_points = device.points;
    config.device_min = device.min;
    config.device_max = device.max;
    require(static_cast<long>(config.particle_points) * config.device_points <= 4096,
            "device_grid.points", "joint dimension exceeds the 4096 budget");
    require(config.particle_sigma > 0.0, "particle_sigma", "must be > 0");
    require(config.device_sigma > 0.0, "device_sigma", "must be > 0");
    require(config.particle_mass > 0.0, "particle_mass", "must be > 0");
    require(config.device_mass > 0.0, "device_mass", "must be > 0");
    require(config.coupling >= 0.0, "coupling", "must be >= 0");
    require(config.dt > 0.0, "dt", "must be > 0");
    require(config.steps >= 1, "steps", "must be >= 1");
    require(config.entropy_low > 0.0, "entropy_low", "must be > 0");
    require(config.entropy_high > config.entropy_low, "entropy_high",
            "must exceed entropy_low");
    return config;
}

json cat_to_json(const scenarios::ProductPersistenceConfig &config) {
    return json{
        {"particle_grid",
         grid_to_json(config.particle_points, config.particle_min, config.particle_max)},
        {"device_grid", grid_to_json(config.device_points, config.device_min, config.device_max)},
        {"particle_sigma", config.particle_sigma},
        {"device_sigma", config.device_sigma},
        {"particle_mass", config.particle_mass},
        {"device_mass", config.device_mass},
        {"coupling", config.coupling},
        {"dt", config.dt},
        {"steps", config.steps},
        {"entropy_low", config.entropy_low},
        {"entropy_high", config.entropy_high}};
}

scenarios::NewtonianConfig parse_newton(Reader &reader) {
    scenarios::NewtonianConfig config;
    std::string potential = "harmonic";
    reader.read_string("potential", potential);
    if (potential == "free") {
        config.potential = scenarios::NewtonianConfig::Potential::Free;
    } else if (potential == "uniform") {
        config.potential = scenarios::NewtonianConfig::Potential::UniformForce;
    } else if (potential == "harmonic") {
        config.potential = scenarios::NewtonianConfig::Potential::Harmonic;
    } else {
        throw ValidationError("potential: must be one of free, uniform, harmonic");
    }
    GridKeys grid{config.grid_points, config.grid_min, config.grid_max};
    read_grid(reader, "grid", grid);
    reader.read_double("force", config.force);
    reader.read_double("omega", config.omega);
    reader.read_double("sigma", config.sigma);
    reader.read_double("mass", config.mass);
    reader.read_double("a0", config.a0);
    reader.read_double("p0", config.p0);
    reader.read_double("t_total", config.t_total);
    reader.read_int("macro_steps", config.macro_steps);
    reader.read_double("trajectory_tolerance", config.trajectory_tolerance);
    validate_grid(grid, "grid");
    config.grid_points = grid.points;
    config.grid_min = grid.min;
    config.grid_max = grid.max;
    require(config.omega > 0.0, "omega", "must be > 0");
    require(config.sigma > 0.0, "sigma", "must be > 0");
    require(config.mass > 0.0, "mass", "must be > 0");
    require(config.t_total > 0.0, "t_total", "must be > 0");
    require(config.macro_steps >= 2, "macro_steps", "must be >= 2");
    require(config.trajectory_tolerance > 0.0, "trajectory_tolerance", "must be > 0");
    require(std::abs(config.a0) + 5.0 * config.sigma <
                std::max(std::abs(config.grid_min), std::abs(config.grid_max)),
            "a0", "initial packet must stay 5 sigma inside the grid");
    return config;
}

json newton_to_json(const scenarios::NewtonianConfig &config) {
    std::string potential = "harmonic";
    if (config.potential == scenarios::NewtonianConfig::Potential::Free) {
        potential = "free";
    } else if (config.potential == scenarios::NewtonianConfig::Potential::UniformForce) {
        potential = "uniform";
    }
    return json{{"potential", potential},
                {"grid", grid_to_json(config.grid_points, config.grid_min, config.grid_max)},
                {"force", config.force},
                {"omega", config.omega},
                {"sigma", config.sigma},
                {"mass", config.mass},
                {"a0", config.a0},
                {"p0", config.p0},
                {"t_total", config.t_total},
                {"macro_steps", config.macro_steps},
                {"trajectory_tolerance", config.trajectory_tolerance}};
}

scenarios::DriftConfig parse_drift(Reader &reader) {
    scenarios::DriftConfig config;
    GridKeys grid{config.grid_points, config.grid_min, config.grid_max};
    read_grid(reader, "grid", grid);
    reader.read_double("sigma", config.sigma);
    reader.read_double("center_separation_sigmas", config.center_separation_sigmas);
    reader.read_double("weight_1", config.weight_1);
    reader.read_double("displacement_angle", config.displacement_angle);
    reader.read_double("drift_magnitude", config.drift_magnitude);
    read_walk(reader, config.walk);
    validate_grid(grid, "grid");
    config.grid_points = grid.points;
    config.grid_min = grid.min;
    config.grid_max = grid.max;
    require(config.sigma > 0.0, "sigma", "must be > 0");
    require(config.center_separation_sigmas >= 6.0, "center_separation_sigmas",
            "must be >= 6 so the detector packets stay distinguishable");
    require(0.5 * config.center_separation_sigmas * config.sigma + 5.0 * config.sigma <=
                config.grid_max,
            "center_separation_sigmas", "detector packets must stay 5 sigma inside the grid");
    require(config.weight_1 > 0.0 && config.weight_1 < 1.0, "weight_1", "must be in (0, 1)");
    require(config.displacement_angle >= 0.0 && config.displacement_angle < 1.2,
            "displacement_angle", "must be in [0, 1.2)");
    require(config.drift_magnitude >= 0.0 || config.drift_magnitude == -1.0, "drift_magnitude",
            "must be >= 0, or -1 for the moderate default");
    validate_walk(config.walk, "walk");
    return config;
}

json drift_to_json(const scenarios::DriftConfig &config) {
    return json{{"grid", grid_to_json(config.grid_points, config.grid_min, config.grid_max)},
                {"sigma", config.sigma},
                {"center_separation_sigmas", config.center_separation_sigmas},
                {"weight_1", config.weight_1},
                {"displacement_angle", config.displacement_angle},
                {"drift_magnitude", config.drift_magnitude},
                {"walk", walk_to_json(config.walk)}};
}

json scenario_to_json(const ScenarioConfig &config) {
    return std::visit(
        [](const auto &c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, scenarios::BornConfig>) {
                return born_to_json(c);
            } else if constexpr (std::is_same_v<T, scenarios::DoubleSlitConfig>) {
                return double_slit_to_json(c);
            } else if constexpr (std::is_same_v<T, scenarios::BoxEscapeConfig>) {
                return box_escape_to_json(c);
            } else if constexpr (std::is_same_v<T, scenarios::EprConfig>) {
                return epr_to_json(c);
            } else if constexpr (std::is_same_v<T, scenarios::ProductPersistenceConfig>) {
                return cat_to_json(c);
            } else if constexpr (std::is_same_v<T, scenarios::NewtonianConfig>) {
                return newton_to_json(c);
            } else {
                return drift_to_json(c);
            }
        },
        config);
}

void apply_walk_overrides(scenarios::WalkParams &walk, const Overrides &overrides) {
    if (overrides.trials) {
        walk.trials = *overrides.trials;
    }
    if (overrides.epsilon) {
        walk.epsilon = *overrides.epsilon;
    }
    if (overrides.dt) {
        walk.dt = *overrides.dt;
    }
    if (overrides.gue_scale) {
        walk.gue_scale = *overrides.gue_scale;
    }
    if (overrides.max_steps) {
        walk.max_steps = *overrides.max_steps;
    }
    if (overrides.threads) {
        walk.threads = *overrides.threads;
    }
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("emit: cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) {
        throw Error("emit: write failed for " + path.string());
    }
}

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string trials_csv(const measure::TrialStats &stats) {
    std::string out = "trial_id,outcome,steps,final_distance\n";
    for (std::size_t i = 0; i < stats.outcomes.size(); ++i) {
        const auto &outcome = stats.outcomes[i];
        out += std::to_string(i);
        out += ',';
        out += outcome.hit() ? std::to_string(outcome.result) : std::string("censored");
        out += ',';
        out += std::to_string(outcome.steps_taken);
        out += ',';
        out += format_number(outcome.final_distance);
        out += '\n';
    }
    return out;
}

std::string table_csv(const scenarios::Table &table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out += table.columns[c];
        out += (c + 1 < table.columns.size()) ? "," : "\n";
    }
    for (const auto &row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += format_number(row[c]);
            out += (c + 1 < row.size()) ? "," : "\n";
        }
    }
    return out;
}

json trial_summary_json(const measure::TrialStats &stats) {
    json intervals = json::array();
    for (const auto &interval : stats.wilson) {
        intervals.push_back(json{{"lo", interval.lo}, {"hi", interval.hi}});
    }
    return json{{"total", stats.total},
                {"counts", stats.counts},
                {"censored", stats.censored},
                {"frequencies", stats.frequencies},
                {"hit_frequencies", stats.hit_frequencies},
                {"wilson_95", intervals},
                {"mean_steps_to_hit", stats.mean_steps_to_hit},
                {"master_seed", stats.master_seed}};
}

}  // namespace

RunConfig parse_and_validate(const std::string &scenario, const json &document,
                             const Overrides &overrides) {
    Reader reader(document, "");

    RunConfig run_config;
    run_config.scenario = scenario;
    run_config.seed = 20260808;
    run_config.out_dir = "out";
    run_config.threads = 0;

    std::string doc_scenario = scenario;
    reader.read_string("scenario", doc_scenario);
    if (doc_scenario != scenario) {
        throw ValidationError("scenario: document says \"" + doc_scenario +
                              "\" but the command is \"" + scenario + "\"");
    }
    reader.read_u64("seed", run_config.seed);
    reader.read_string("out", run_config.out_dir);
    reader.read_int("threads", run_config.threads);
    require(run_config.threads >= 0, "threads", "must be >= 0 (0 = auto)");

    if (overrides.seed) {
        run_config.seed = *overrides.seed;
    }
    if (overrides.out_dir) {
        run_config.out_dir = *overrides.out_dir;
    }
    if (overrides.threads) {
        run_config.threads = *overrides.threads;
        require(run_config.threads >= 0, "threads", "must be >= 0 (0 = auto)");
    }

    auto finalize_walk = [&](scenarios::WalkParams &walk) {
        apply_walk_overrides(walk, overrides);
        walk.threads = run_config.threads;
        validate_walk(walk, "walk");
    };

    if (scenario == "born") {
        auto config = parse_born(reader);
        finalize_walk(config.walk);
        config.seed = run_config.seed;
        run_config.config = config;
    } else if (scenario == "double-slit") {
        auto config = parse_double_slit(reader);
        finalize_walk(config.walk);
        config.seed = run_config.seed;
        run_config.config = config;
    } else if (scenario == "box-escape") {
        auto config = parse_box_escape(reader);
        config.seed = run_config.seed;
        run_config.config = config;
    } else if (scenario == "epr") {
        auto config = parse_epr(reader);
        finalize_walk(config.walk);
        config.seed = run_config.seed;
        run_config.config = config;
    } else if (scenario == "cat") {
        auto config = parse_cat(reader);
        config.seed = run_config.seed;
        run_config.config = config;
    } else if (scenario == "newton") {
        auto config = parse_newton(reader);
        config.seed = run_config.seed;
        run_config.config = config;
    } else if (scenario == "drift") {
        auto config = parse_drift(reader);
        finalize_walk(config.walk);
        config.seed = run_config.seed;
        run_config.config = config;
    } else {
        throw ValidationError("scenario: unknown scenario \"" + scenario + "\"");
    }
    reader.finish();

    run_config.effective = json{{"scenario", run_config.scenario},
                                {"seed", run_config.seed},
                                {"out", run_config.out_dir},
                                {"threads", run_config.threads}};
    const json body = scenario_to_json(run_config.config);
    for (const auto &[key, value] : body.items()) {
        run_config.effective[key] = value;
    }
    return run_config;
}

scenarios::ScenarioReport run(const RunConfig &config) {
    return std::visit(
        [](const auto &c) -> scenarios::ScenarioReport {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, scenarios::BornConfig>) {
                return scenarios::born_run(c);
            } else if constexpr (std::is_same_v<T, scenarios::DoubleSlitConfig>) {
                return scenarios::double_slit_run(c);
            } else if constexpr (std::is_same_v<T, scenarios::BoxEscapeConfig>) {
                return scenarios::box_escape_run(c);
            } else if constexpr (std::is_same_v<T, scenarios::EprConfig>) {
                return scenarios::epr_run(c);
            } else if constexpr (std::is_same_v<T, scenarios::ProductPersistenceConfig>) {
                return scenarios::product_persistence_run(c);
            } else if constexpr (std::is_same_v<T, scenarios::NewtonianConfig>) {
                return scenarios::newtonian_equivalence_run(c);
            } else {
                return scenarios::drift_invariance_run(c);
            }
        },
        config.config);
}

std::vector<std::string> emit(const scenarios::ScenarioReport &report, const RunConfig &config,
                              const std::string &out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw Error("emit: cannot create directory " + out_dir + ": " + ec.message());
    }
    std::vector<std::string> written;

    json flags = json::array();
    for (const auto &flag : report.flags) {
        flags.push_back(json{{"name", flag.name},
                             {"pass", flag.pass},
                             {"value", flag.value},
                             {"threshold", flag.threshold},
                             {"comparison", flag.comparison}});
    }
    json metrics = json::object();
    for (const auto &[name, value] : report.metrics) {
        metrics[name] = value;
    }
    json summary{{"scenario", config.scenario}, {"variant", report.scenario},
                 {"seed", report.seed},         {"config", config.effective},
                 {"flags", flags},              {"metrics", metrics},
                 {"all_passed", report.all_passed()}};
    if (report.trials) {
        summary["trial_summary"] = trial_summary_json(*report.trials);
    }
    if (report.trials_secondary) {
        summary["trial_summary_b"] = trial_summary_json(*report.trials_secondary);
    }

    const fs::path base(out_dir);
    write_file(base / "summary.json", summary.dump(2) + "\n");
    written.push_back((base / "summary.json").string());

    if (report.trials) {
        write_file(base / "trials.csv", trials_csv(*report.trials));
        written.push_back((base / "trials.csv").string());
    }
    if (report.trials_secondary) {
        write_file(base / "trials_b.csv", trials_csv(*report.trials_secondary));
        written.push_back((base / "trials_b.csv").string());
    }
    for (const auto &table : report.tables) {
        const fs::path path = base / (table.name + ".csv");
        write_file(path, table_csv(table));
        written.push_back(path.string());
    }
    return written;
}

}  // namespace statewalk::cli
