#include "ionnode/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ionnode::noise {

using quantum::Complex;
using quantum::Matrix;

namespace {

void require_qubit(const QuantumState& rho, std::size_t target, const char* who) {
    if (target >= rho.subsystems().size()) throw std::out_of_range(std::string(who) + ": target out of range");
    if (rho.subsystems()[target].dim != 2) throw std::invalid_argument(std::string(who) + ": target is not a qubit");
}

Matrix pauli(char which) {
    Matrix m = Matrix::Zero(2, 2);
    switch (which) {
        case 'x': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 'y': m(0, 1) = Complex(0, -1); m(1, 0) = Complex(0, 1); break;
        case 'z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        default: m = Matrix::Identity(2, 2);
    }
    return m;
}

}  // namespace

void NoiseParams::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument(field + ": " + why);
    };
    if (!(t1_prime > 0.0)) fail("t1_prime", "must be > 0");
    if (!(t2 > 0.0)) fail("t2", "must be > 0");
    if (snr && !(*snr >= 0.0)) fail("snr", "must be >= 0");
    if (!(raman_pi_fidelity >= 0.0 && raman_pi_fidelity <= 1.0)) fail("raman_pi_fidelity", "must be in [0, 1]");
    if (!(merge_fidelity >= 0.0 && merge_fidelity <= 1.0)) fail("merge_fidelity", "must be in [0, 1]");
    if (raman_pulses < 0) fail("raman_pulses", "must be >= 0");
    for (std::size_t i = 0; i < mod.size(); ++i)
        if (!(mod[i].frequency >= 0.0)) fail("mod[" + std::to_string(i) + "].frequency", "must be >= 0");
}

double metastable_decay(double t, double t1_prime) {
    if (t < 0.0) throw std::invalid_argument("metastable_decay: negative time");
    return std::exp(-t / t1_prime);
}

QuantumState gaussian_dephasing(const QuantumState& rho, double t, double t2, std::size_t target) {
    require_qubit(rho, target, "gaussian_dephasing");
    const double c = std::exp(-(t / t2) * (t / t2));
    const Matrix kraus[] = {std::sqrt((1.0 + c) / 2.0) * pauli('i'), std::sqrt((1.0 - c) / 2.0) * pauli('z')};
    return quantum::apply_channel(rho, kraus, target);
}

double ac_line_phase(double t, std::span<const Modulation> mod) {
    double phase = 0.0;
    for (const auto& m : mod) phase += m.amplitude * std::sin(2.0 * std::numbers::pi * m.frequency * t + m.phase);
    return phase;
}

double memory_coherence(double t, const NoiseParams& p) {
    return std::exp(-(t / p.t2) * (t / p.t2)) * std::cos(ac_line_phase(t, p.mod));
}

double storage_fidelity(double t, const NoiseParams& p) { return 0.5 * (1.0 + memory_coherence(t, p)); }

QuantumState snr_mixture(const QuantumState& rho, double snr) {
    if (!(snr >= 0.0)) throw std::invalid_argument("snr_mixture: snr must be >= 0");
    if (std::isinf(snr)) return rho.as_mixed();
    const auto d = static_cast<double>(rho.dimension());
    const Matrix r = rho.density();
    const Matrix mixed = (snr / (snr + 1.0)) * r + Matrix::Identity(r.rows(), r.cols()) / (d * (snr + 1.0));
    return QuantumState::mixed(rho.subsystems(), mixed);
}

QuantumState depolarize(const QuantumState& rho, double lambda, std::size_t target) {
    require_qubit(rho, target, "depolarize");
    if (!(lambda >= -1.0 / 3.0 - 1e-12 && lambda <= 1.0 + 1e-12))
        throw std::invalid_argument("depolarize: lambda outside [-1/3, 1]");
    const double p = 1.0 - lambda;
    const Matrix kraus[] = {
        std::sqrt(std::max(0.0, 1.0 - 0.75 * p)) * pauli('i'),
        std::sqrt(p / 4.0) * pauli('x'),
        std::sqrt(p / 4.0) * pauli('y'),
        std::sqrt(p / 4.0) * pauli('z'),
    };
    return quantum::apply_channel(rho, kraus, target);
}

QuantumState average_fidelity_channel(const QuantumState& rho, double fidelity, std::size_t target) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw std::invalid_argument("fidelity must be in [0, 1]");
    return depolarize(rho, 2.0 * fidelity - 1.0, target);
}

QuantumState raman_transfer(const QuantumState& rho, int n_pulses, double f_pi, std::size_t target) {
    if (n_pulses < 0) throw std::invalid_argument("raman_transfer: negative pulse count");
    if (n_pulses == 0) return rho;
    return average_fidelity_channel(rho, std::pow(f_pi, n_pulses), target);
}

}  // namespace ionnode::noise
