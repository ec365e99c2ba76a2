// protocol_sim.hpp - Monte Carlo of the node sequence and of one
// entanglement swap between two heralded links, plus the analytic swap curve
#pragma once

#include "ionnode/budget.hpp"
#include "ionnode/noise.hpp"
#include "ionnode/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ionnode::sim {

struct TrialRecord {
    std::uint64_t sequence = 0;
    std::uint64_t attempts = 0;      // attempt index of the herald, from 1
    double herald_time = 0.0;        // s from sequence start, setup included
    std::uint64_t block_index = 0;   // cooling blocks completed before the herald
    double memory_elapsed = 0.0;     // s
    bool decayed = false;
    std::optional<double> bell_fidelity;    // communication qubit, after conversion
    std::optional<double> memory_fidelity;  // storage fidelity at readout
    std::string pattern = "click";
};

struct NodeSummary {
    std::uint64_t sequences = 0;
    std::uint64_t attempts = 0;
    double attempt_time = 0.0;  // s spent in attempt loops
    std::uint64_t decayed = 0;
    double per_attempt_probability = 0.0;
    double herald_rate = 0.0;             // heralds per second of attempt loop
    double analytic_herald_rate = 0.0;
    double decay_fraction = 0.0;
    double analytic_decay_fraction = 0.0;
};

/// Seconds to the first success: k ~ Geom(p) attempts at `attempt_period`,
/// plus floor(k / cooling_every) cooling breaks.
double waiting_time_sampler(double p, double attempt_period, int cooling_every, double cooling_time, Stream& rng);

/// Same draw, also returning the attempt count.
struct Wait {
    std::uint64_t attempts = 0;
    double time = 0.0;
};
Wait sample_wait(double p, double attempt_period, int cooling_every, double cooling_time, Stream& rng);

/// Exact mean of waiting_time_sampler.
double mean_waiting_time(double p, double attempt_period, int cooling_every, double cooling_time);

/// One record per sequence, in sequence order, independent of `workers`.
std::vector<TrialRecord> run_node_sequence(const budget::NodeConfig& config, const noise::NoiseParams& noise,
                                           std::uint64_t seed, std::uint64_t n_sequences, unsigned workers = 1);

NodeSummary summarize(const std::vector<TrialRecord>& records, const budget::NodeConfig& config,
                      const noise::NoiseParams& noise);

struct SwapResult {
    double waiting_time = 0.0;  // s for the second link
    bool success = false;
    std::optional<double> fidelity;  // photon-photon, on success only
};

/// Photon-photon fidelity after an ideal swap when the stored half was
/// dephased for `t` with Gaussian time t2. Evaluated on explicit states.
double swap_fidelity(double t, double t2);

struct SwapConfig {
    double t1_prime = 0.79;
    double t2 = 0.323;
    double ms_gate_infidelity = 0.0;
    double detection_infidelity = 0.0;
};

/// Link 1 is heralded by node a; node b attempts until link 2 heralds.
std::vector<SwapResult> swap_experiment(const budget::NodeConfig& config_a, const budget::NodeConfig& config_b,
                                        const SwapConfig& swap, std::uint64_t seed, std::uint64_t n_trials,
                                        unsigned workers = 1);

struct SwapPoint {
    double rate = 0.0;
    double success = 0.0;
    double fidelity = 0.0;
    double mc_success = 0.0;
    double mc_fidelity = 0.0;
};

/// Analytic success R/(R + 1/T1') and fidelity (1 + E[exp(-(t/T2)^2)])/2 with
/// t ~ (R + 1/T1') exp(-(R + 1/T1') t) when `conditioned`, R exp(-R t) otherwise.
double swap_success(double rate, double t1_prime);
double swap_curve_fidelity(double rate, double t1_prime, double t2, bool conditioned = true);

struct SwapCurveOptions {
    bool conditioned = true;
    std::uint64_t mc_trials = 100000;  // 0 disables the Monte Carlo columns
    std::uint64_t seed = 1;
    double attempt_rate = 1.0e6;       // Hz, Monte Carlo attempt cadence
    unsigned workers = 1;
};

std::vector<SwapPoint> swap_curve(const std::vector<double>& rates, double t1_prime, double t2,
                                  const SwapCurveOptions& options = {});

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t n);

}  // namespace ionnode::sim
