#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainavail/mugf.hpp"
#include "chainavail/optimize.hpp"

namespace chainavail {

// Schema or semantic violation in a configuration file; `path` points at the
// offending field (e.g. "tiers[1].replicas").
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& field_path, const std::string& msg)
        : std::runtime_error(field_path + ": " + msg), path(field_path) {}
    std::string path;
};

struct AnalysisSettings {
    double prune_threshold = 0.0;
};

struct OptimizationSettings {
    bool present = false;
    double availability_target = 0.0;
    int max_replicas = 1;
    CostModel costs;
};

struct AppConfig {
    ChainSpec chain;  // thresholds normalized to seconds
    AnalysisSettings analysis;
    OptimizationSettings optimization;
};

// Parse and validate a JSON config document. Unknown keys are rejected; every
// rate/duration field declares its units and is normalized to per-second /
// seconds here.
AppConfig parse_config(const std::string& json_text);

AppConfig load_config(const std::string& path);

// Re-emit the config with every rate in per_second and every duration in
// seconds; reloading the result reproduces the same model bit-for-bit.
std::string dump_normalized(const AppConfig& cfg);

}  // namespace chainavail
