// crosstalk.hpp - disturbance of the memory ion by communication-ion light:
// off-resonant scattering, differential AC Stark phase, recoil heating.
//
// Frequencies (omega, delta) are cyclic, in Hz, and converted to angular
// units internally. gamma is the upper-level decay rate in 1/s.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ionnode::crosstalk {

struct CrosstalkParams {
    double omega = 0.0;        // Hz, Rabi frequency
    double delta = 0.0;        // Hz, detuning from the memory transition
    double gamma = 0.0;        // 1/s
    double tau = 0.0;          // s, pulse duration
    double pol_coeff = 0.0;    // polarization coefficient
    double echo_alpha = 1.0;   // spin-echo suppression
    double attempt_rate = 0.0; // Hz
    /// Operations per attempt: 1 for every-attempt pulses, 1/N for cooling.
    double ops_per_attempt = 1.0;

    /// Throws std::invalid_argument on negative fields. Returns a warning
    /// string (empty if none) when omega/delta > 0.1.
    std::string validate() const;
};

/// Omega^2 / (2 Omega^2 + 4 Delta^2)
double offres_excitation(double omega, double delta);

/// (Omega^2 / 4 Delta^2) Gamma tau per operation.
double scattering_error(const CrosstalkParams& p);
/// scattering_error * attempt_rate * ops_per_attempt, 1/s.
double scattering_rate(const CrosstalkParams& p);

/// (Omega^2 / 4 Delta) tau P alpha per operation, rad.
double stark_phase(const CrosstalkParams& p);
double stark_phase_rate(const CrosstalkParams& p);

/// Field amplitude at distance `separation` from the axis of a Gaussian beam
/// with 1/e^2 intensity radius `radius`, relative to the peak.
double rabi_scale_gaussian(double separation, double radius);

struct HeatingParams {
    double lambda = 397e-9;        // m
    double mass = 40.0 * 1.66053906660e-27;
    double p_excite = 0.95;
    int n_modes = 6;
    std::vector<double> mode_freqs;  // Hz (cyclic)
    double pump_survival = 2.0 / 3.0;
    int n_pump_rounds = 5;
    double initial_unwanted = 1.0 / 3.0;

    void validate() const;
};

struct RecoilHeating {
    double energy = 0.0;                   // J per attempt
    std::vector<double> phonons_per_mode;  // one per mode_freqs entry
};

/// Energy p_excite (h/lambda)^2 / 2m, shared equally over n_modes.
RecoilHeating recoil_heating(const HeatingParams& hp);

/// Expected emitted photons per optical pumping: the unwanted population
/// (initial_unwanted) scatters one photon per round and stays unwanted with
/// probability `survival`, for at most `rounds` rounds.
double pumping_photon_count(double survival = 2.0 / 3.0, int rounds = 5, double initial_unwanted = 1.0 / 3.0);

/// Recoil heating of excitation plus pumping photons, phonons per attempt per mode.
std::vector<double> combined_heating(const HeatingParams& hp);

struct PhononRange {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

PhononRange equilibrium_phonons(double base_nbar, double heat_per_attempt, int attempts_between_cooling);

struct Operation {
    std::string name;
    /// One or more beams of this operation; rates add up.
    std::vector<CrosstalkParams> beams;
    /// Field at the memory ion relative to the beam peak, for the Stark phase
    /// of addressed beams. Global beams use 1.
    double memory_scale = 1.0;
};

struct LedgerRow {
    std::string name;
    double decay_per_op = 0.0;
    double decay_rate = 0.0;   // 1/s
    double phase_per_op = 0.0; // rad
    double phase_rate = 0.0;   // rad/s
};

struct Ledger {
    std::vector<LedgerRow> rows;
    LedgerRow total;
    std::vector<std::string> warnings;
};

/// Population decay and decoherence of the memory per operation type.
Ledger crosstalk_ledger(const std::vector<Operation>& ops);

nlohmann::json to_json(const Ledger& ledger);

}  // namespace ionnode::crosstalk
