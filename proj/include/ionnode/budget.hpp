// budget.hpp - ion-photon rate and infidelity ledgers, attempt-rate limits
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ionnode::budget {

/// Stage values that a "future improvements" column replaces.
struct Improvements {
    std::optional<double> objective_eff;
    std::optional<double> fiber_coupling;
    std::optional<double> conversion_eff;
    std::optional<double> fiber_transmission;
    std::optional<double> other_optics;
    std::optional<double> detector_eff;
    std::optional<double> attempt_rate;
    std::optional<double> multiplexing;
};

struct NodeConfig {
    double branching_weight = 0.04;
    double excitation_prob = 0.95;
    double objective_eff = 0.06;
    double fiber_coupling = 0.32;
    std::optional<double> conversion_eff;
    double fiber_transmission = 0.80;
    double other_optics = 0.75;
    double detector_eff = 0.40;

    double attempt_rate = 264e3;    // Hz, measured cadence
    double fiber_length = 3.0;      // m
    double fiber_light_speed = 2.0e8;
    double rate_ceiling = 1.0e6;    // Hz, electronics limit at zero length
    double multiplexing = 1.0;      // modes sharing one round trip

    int cooling_period_attempts = 100;
    double cooling_time = 200e-6;   // s
    /// True when attempt_rate already averages in cooling and other overhead.
    bool rate_includes_overhead = true;
    double doppler_time = 2.5e-3;
    double eit_time = 1.4e-3;
    double storage_time = 0.04;     // s, 2 tau

    std::optional<Improvements> future;

    double setup_time() const { return doppler_time + eit_time; }
    NodeConfig improved() const;
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct Stage {
    std::string name;
    double value = 0.0;
};

struct RateReport {
    std::vector<Stage> stages;       // only the stages present in the column
    double per_attempt_probability = 0.0;
    double attempt_rate = 0.0;
    double success_rate = 0.0;
    double attempt_rate_cap = 0.0;
    /// attempt_rate / attempt_rate_cap: the unitemized overhead in one number.
    double cap_utilization = 0.0;
    std::vector<std::string> warnings;
};

struct InfidelityTerm {
    std::string name;
    double value = 0.0;
};

struct InfidelityReport {
    std::vector<InfidelityTerm> terms;
    double total = 0.0;
};

// Row labels as printed in the ledgers.
inline constexpr const char* kBranchingRow = "Branching ratio and weight from CG-coefficient";
inline constexpr const char* kExcitationRow = "picosecond pulse excitation probability";
inline constexpr const char* kObjectiveRow = "Collection efficiency of objective";
inline constexpr const char* kCouplingRow = "Single mode fiber coupling efficiency";
inline constexpr const char* kConversionRow = "Wavelength conversion efficiency (end-to-end)";
inline constexpr const char* kFiberRow = "Flying qubit transmission in fiber";
inline constexpr const char* kOpticsRow =
    "Other optical elements transmission (mirrors, lenses, fibers, vacuum chamber window, etc.)";
inline constexpr const char* kDetectorRow = "Detector efficiency";
inline constexpr const char* kAttemptRow = "Attempting rate";
inline constexpr const char* kSuccessRow = "Success rate";
inline constexpr const char* kTotalInfidelityRow = "Total infidelity";

/// Product of all stage efficiencies (no attempt rate).
double stage_product(const NodeConfig& config);

RateReport rate_budget(const NodeConfig& config);

/// rate_budget of config.improved(); throws if the config has no improvement block.
RateReport rate_budget_future(const NodeConfig& config);

/// Round-trip limited cadence 1/(2L/c), capped by `ceiling`; L = 0 returns the ceiling.
double attempt_rate_cap(double length_m, double c_fiber = 2.0e8, double ceiling = 1.0e6);

InfidelityReport infidelity_budget(const std::vector<InfidelityTerm>& terms);

/// 1 - exp(-n window / t1_prime)
double decay_success_penalty(double window_s, double t1_prime, int n_memories);

}  // namespace ionnode::budget
