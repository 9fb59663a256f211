#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rdmusic/harness.hpp"
#include "rdmusic/params.hpp"

namespace rdmusic {

/*
 * JSON configuration. Top-level sections:
 *   "system":     SystemParams (powers given in dBm)
 *   "scenario":   ScenarioOptions plus an optional explicit "targets" list
 *   "experiment": sweep lists, trial count, seed, methods, estimator options
 * Unknown keys are rejected so typos surface early.
 */
nlohmann::json to_json(const SystemParams& p);
SystemParams system_from_json(const nlohmann::json& j, SystemParams base = {});

nlohmann::json to_json(const ScenarioOptions& s);
ScenarioOptions scenario_options_from_json(const nlohmann::json& j, ScenarioOptions base = {});

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig experiment_from_json(const nlohmann::json& j);

ExperimentConfig load_experiment(const std::filesystem::path& path);
void save_experiment(const std::filesystem::path& path, const ExperimentConfig& c);

}  // namespace rdmusic
