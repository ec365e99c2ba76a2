// tomography.hpp - two-qubit Pauli tomography: count simulation, RrhoR
// maximum-likelihood reconstruction, correlation visibilities
#pragma once

#include "ionnode/quantum_state.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ionnode::tomography {

using quantum::Matrix;
using quantum::QuantumState;

/// Outcomes per setting are ordered (++, +-, -+, --) for the eigenvalues of
/// the two Pauli operators.
struct CountTable {
    std::vector<std::string> settings;           // "XX", "XY", ..., "ZZ"
    std::vector<std::array<double, 4>> counts;   // may be fractional (exact frequencies)
    double shots = 0.0;                          // per setting

    /// Throws on ragged or inconsistent tables.
    void validate() const;
    /// True when all nine Pauli pairs are present.
    bool complete() const;
};

std::vector<std::string> pauli_settings();

/// Projector of one setting/outcome on the two-qubit space.
Matrix outcome_projector(const std::string& setting, int outcome);

/// Multinomial sampling of Born probabilities, deterministic per seed.
CountTable simulate_counts(const QuantumState& rho, const std::vector<std::string>& settings, std::uint64_t shots,
                           std::uint64_t seed);

/// shots * Born probabilities, no sampling noise.
CountTable exact_counts(const QuantumState& rho, const std::vector<std::string>& settings, double shots);

struct MleOptions {
    int max_iterations = 5000;
    double tolerance = 1e-10;           // on the per-count log-likelihood
    double residual_tolerance = 1e-10;  // on max |R rho - rho|
};

struct MleResult {
    QuantumState state;
    int iterations = 0;
    bool converged = false;
    std::vector<double> log_likelihood;  // per count, one entry per accepted iterate
};

/// Iterates rho <- R rho R / tr; a step that would lower the likelihood is
/// diluted toward the identity until it does not.
MleResult mle_reconstruct(const CountTable& counts, const MleOptions& options = {});

/// sum n log p / sum n
double log_likelihood(const CountTable& counts, const Matrix& rho);

/// One undiluted RrhoR update.
Matrix rrhor_step(const CountTable& counts, const Matrix& rho);

struct Visibilities {
    double vx = 0.0, vy = 0.0, vz = 0.0;
    /// Signs of <XX>, <YY>, <ZZ>: the Bell state the absolute values refer to.
    std::array<int, 3> signs{1, 1, 1};
};

Visibilities visibilities(const CountTable& counts);
Visibilities visibilities(const QuantumState& rho);

struct PhaseScanFit {
    double visibility = 0.0;
    double phase = 0.0;
    double offset = 0.0;
    double visibility_error = 0.0;
};

/// Fits n_plus/n = (1 + V cos(phi + phi0))/2 by weighted least squares.
/// Throws with fewer than four phase points.
PhaseScanFit fit_phase_scan(const std::vector<double>& phases, const std::vector<double>& n_plus,
                            const std::vector<double>& n_total);

nlohmann::json to_json(const CountTable& counts);
CountTable counts_from_json(const nlohmann::json& doc);

}  // namespace ionnode::tomography
