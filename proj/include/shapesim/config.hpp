#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "shapesim/sim_config.hpp"
#include "shapesim/workload.hpp"

namespace shapesim {

/// Contents of a config file: {"workload": {...}, "sim": {...}}. Both sections are
/// optional and missing fields keep their defaults; unknown keys are rejected.
struct ExperimentConfig {
    WorkloadConfig workload;
    SimConfig sim;
};

nlohmann::json to_json(const WorkloadConfig& config);
nlohmann::json to_json(const SimConfig& config);

/// Throw InvalidConfig naming the offending key.
WorkloadConfig workload_config_from_json(const nlohmann::json& j);
SimConfig sim_config_from_json(const nlohmann::json& j);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Reads and validates a config file. SHAPESIM_SEED, when set, replaces the workload seed.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parsed value of SHAPESIM_SEED, if set.
std::optional<std::uint64_t> seed_override();

}  // namespace shapesim
