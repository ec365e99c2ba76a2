// noise.hpp - memory decay, dephasing and imperfect-pulse channels
#pragma once

#include "ionnode/quantum_state.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ionnode::noise {

using quantum::QuantumState;

/// One tone of the line-synchronous phase noise.
struct Modulation {
    double frequency = 0.0;  // Hz
    double amplitude = 0.0;  // rad
    double phase = 0.0;      // rad
};

struct NoiseParams {
    double t1_prime = 0.79;  // s, effective metastable lifetime
    double t2 = 0.323;       // s, Gaussian 1/e dephasing time
    std::vector<Modulation> mod{{50.0, 0.0, 0.0}, {150.0, 0.0, 0.0}};
    std::optional<double> snr;  // absent: no noise heralds
    double raman_pi_fidelity = 0.992;
    int raman_pulses = 2;
    double merge_fidelity = 0.96;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Survival probability exp(-t / t1_prime).
double metastable_decay(double t, double t1_prime);

/// Scales the off-diagonal blocks of qubit `target` by exp(-(t/t2)^2).
QuantumState gaussian_dephasing(const QuantumState& rho, double t, double t2, std::size_t target);

/// sum_i A_i sin(2 pi f_i t + phi_i)
double ac_line_phase(double t, std::span<const Modulation> mod);

/// exp(-(t/t2)^2) cos(ac_line_phase(t))
double memory_coherence(double t, const NoiseParams& p);

/// (1 + memory_coherence(t)) / 2
double storage_fidelity(double t, const NoiseParams& p);

/// (snr/(snr+1)) rho + I/(d (snr+1)). Infinite snr returns rho.
QuantumState snr_mixture(const QuantumState& rho, double snr);

/// rho -> lambda rho + (1 - lambda) I/2 (x) tr_target(rho) on a qubit.
/// Valid for lambda in [-1/3, 1].
QuantumState depolarize(const QuantumState& rho, double lambda, std::size_t target);

/// Qubit channel with six-state averaged fidelity `fidelity`.
QuantumState average_fidelity_channel(const QuantumState& rho, double fidelity, std::size_t target);

/// n Raman pulses of fidelity f_pi as one channel with averaged fidelity f_pi^n.
QuantumState raman_transfer(const QuantumState& rho, int n_pulses, double f_pi, std::size_t target);

/// Six-state average of <psi| E(|psi><psi|) |psi> for a single-qubit map.
template <class Channel>
double mub_average_fidelity(Channel&& channel);

}  // namespace ionnode::noise

#include "ionnode/noise_inl.hpp"
