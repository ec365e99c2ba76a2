// scenario.hpp - named JSON scenarios bundling every module's parameters
#pragma once

#include "ionnode/budget.hpp"
#include "ionnode/conversion.hpp"
#include "ionnode/crosstalk.hpp"
#include "ionnode/heralding.hpp"
#include "ionnode/noise.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ionnode::scenario {

/// Malformed or missing configuration. what() starts with the field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CrosstalkOperation {
    crosstalk::Operation op;
    /// Addressed beam geometry: memory_scale follows from it when present.
    std::optional<double> separation;
    std::optional<double> radius;
};

struct Heating {
    crosstalk::HeatingParams params;
    double base_nbar = 0.0;
    int attempts_between_cooling = 100;
};

struct Conversion {
    conversion::ConversionModel model;
    std::optional<std::pair<double, double>> anchor;  // (power W, efficiency)
    double pump_power = 1.1;
    std::optional<double> signal_rate;
};

struct Scenario {
    std::string name;
    std::string description;
    budget::NodeConfig node;
    noise::NoiseParams noise;
    std::vector<budget::InfidelityTerm> infidelity;
    heralding::HeraldParams herald;
    std::vector<CrosstalkOperation> crosstalk;
    std::optional<Heating> heating;
    std::optional<Conversion> conversion;
    std::map<std::string, std::string> outputs;

    std::vector<crosstalk::Operation> crosstalk_operations() const;
};

Scenario parse(const nlohmann::json& doc);
nlohmann::json serialize(const Scenario& s);

/// Directory searched for scenario names: $IONNODE_SCENARIO_DIR, else the
/// build-time default.
std::filesystem::path scenario_dir();

/// A path to an existing file, or a name looked up as <dir>/<name>.json.
std::filesystem::path resolve(const std::string& name_or_path);
Scenario load(const std::string& name_or_path);

/// Names of the scenarios in scenario_dir(), sorted.
std::vector<std::string> list_scenarios();

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

}  // namespace ionnode::scenario
