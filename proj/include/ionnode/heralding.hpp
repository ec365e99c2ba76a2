// heralding.hpp - direct ion-photon heralds, two-photon BSM and
// single-photon interference between two nodes
//
// Ion qubits use |up> = 0, |down> = 1. Photonic modes are truncated Fock
// spaces holding up to two photons.
#pragma once

#include "ionnode/budget.hpp"
#include "ionnode/noise.hpp"
#include "ionnode/quantum_state.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ionnode::heralding {

using quantum::Matrix;
using quantum::QuantumState;

inline constexpr std::size_t kFockDim = 3;

enum class Scheme { direct, bsm, single_photon };

struct HeraldParams {
    double chi = 0.02;
    double eta = 1.0;
    Scheme scheme = Scheme::single_photon;
    double phase = 0.0;  // relative optical path phase, single-photon scheme
};

struct HeraldOutcome {
    std::string pattern;
    double probability = 0.0;
    /// Share of `probability` coming from exactly one photon at the detectors.
    double single_photon_probability = 0.0;
    std::optional<QuantumState> post_state;  // ion-ion state, empty at zero weight
};

/// |psi>_a (x) |psi>_b with |psi> = sqrt(1-chi)|down,0> + sqrt(chi)|up,1>,
/// subsystems (ion_a, ion_b, mode_a, mode_b).
QuantumState single_photon_joint_state(double chi);

/// 9x9 matrix on |n_a n_b> (index 3 n_a + n_b) for a^dag -> (c^dag + d^dag)/sqrt2,
/// b^dag -> (c^dag - d^dag)/sqrt2. Exact on the <= 2 photon sector, identity on
/// the unreachable |12>, |21>, |22>.
Matrix beamsplitter_matrix();

/// Interferes subsystems mode_a, mode_b into mode_c, mode_d. Rejects inputs with
/// more than one photon in an input mode.
QuantumState beamsplitter(const QuantumState& state);

/// Amplitude-damping Kraus operators for transmission eta on one Fock mode.
std::vector<Matrix> loss_kraus(double eta);

/// Threshold-detector patterns "none", "c", "d", "cd" with ion-ion post-states.
std::vector<HeraldOutcome> herald_single_photon(double chi, double eta_a, double eta_b, double phase = 0.0);

/// Polarization BSM on two ion-photon pairs. Patterns "psi_plus", "psi_minus", "fail".
std::vector<HeraldOutcome> herald_bsm(const QuantumState& state_a, const QuantumState& state_b, double eta_a,
                                      double eta_b);

struct DirectHerald {
    double probability = 0.0;
    QuantumState state;  // (ion, photon)
};

/// Per-attempt success is the stage product; the heralded Bell pair passes the
/// Raman and merge channels on the ion and the SNR admixture.
DirectHerald direct_herald(const budget::NodeConfig& config, const noise::NoiseParams& noise);

nlohmann::json outcomes_to_json(const std::vector<HeraldOutcome>& outcomes);

}  // namespace ionnode::heralding
