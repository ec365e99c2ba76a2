#include "ionnode/noise.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ionnode;
using namespace ionnode::noise;
using quantum::Ket;
using quantum::Matrix;

namespace {

QuantumState plus_state() {
    Ket k(2);
    k << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return QuantumState::pure({{"q", 2}}, k);
}

}  // namespace

TEST(Decay, Survival) {
    EXPECT_DOUBLE_EQ(metastable_decay(0.0, 0.79), 1.0);
    EXPECT_NEAR(metastable_decay(0.79, 0.79), std::exp(-1.0), 1e-15);
    EXPECT_THROW(metastable_decay(-1.0, 0.79), std::invalid_argument);
}

TEST(Dephasing, CoherenceFollowsGaussian) {
    const double t2 = 0.323;
    for (double t : {0.0, 0.04, 0.2, 0.323, 1.0}) {
        const auto out = gaussian_dephasing(plus_state(), t, t2, 0);
        const double expected = 0.5 * std::exp(-(t / t2) * (t / t2));
        EXPECT_NEAR(out.density()(0, 1).real(), expected, 1e-12);
        EXPECT_NEAR(out.density()(0, 0).real(), 0.5, 1e-12);
    }
}

TEST(Dephasing, StorageFidelityAtT2) {
    NoiseParams p;
    EXPECT_NEAR(storage_fidelity(p.t2, p), (1.0 + std::exp(-1.0)) / 2.0, 1e-12);
}

TEST(Dephasing, LinePhaseModulatesCoherence) {
    NoiseParams p;
    p.mod = {{50.0, 0.3, 0.0}, {150.0, 0.1, 0.5}};
    const double t = 0.013;
    const double phase = 0.3 * std::sin(2 * std::numbers::pi * 50 * t) + 0.1 * std::sin(2 * std::numbers::pi * 150 * t + 0.5);
    EXPECT_NEAR(ac_line_phase(t, p.mod), phase, 1e-12);
    EXPECT_NEAR(memory_coherence(t, p), std::exp(-std::pow(t / p.t2, 2)) * std::cos(phase), 1e-12);
}

TEST(SnrMixture, WeightsAndLimit) {
    const auto b = quantum::bell_state();
    const auto out = snr_mixture(b, 22.0);
    EXPECT_NEAR(quantum::bell_fidelity(out), 22.0 / 23.0 + 1.0 / 23.0 / 4.0, 1e-12);
    EXPECT_LT((snr_mixture(b, std::numeric_limits<double>::infinity()).density() - b.density()).norm(), 1e-15);
    EXPECT_THROW(snr_mixture(b, -1.0), std::invalid_argument);
}

TEST(Depolarize, BlochVectorShrinks) {
    const double lambda = 0.7;
    const auto out = depolarize(plus_state(), lambda, 0);
    EXPECT_NEAR(2.0 * out.density()(0, 1).real(), lambda, 1e-12);
    EXPECT_NO_THROW(out.validate());
}

TEST(Depolarize, AcceptsNegativeLambdaDownToMinusThird) {
    EXPECT_NO_THROW(depolarize(plus_state(), -1.0 / 3.0, 0).validate());
    EXPECT_THROW(depolarize(plus_state(), -0.5, 0), std::invalid_argument);
}

TEST(AverageFidelity, ChannelHitsTarget) {
    for (double f : {0.5, 0.9, 0.96, 0.992, 1.0}) {
        const double got = mub_average_fidelity([&](const QuantumState& s) { return average_fidelity_channel(s, f, 0); });
        EXPECT_NEAR(got, f, 1e-12);
    }
}

TEST(AverageFidelity, RamanTransferIsOneChannelOfProductFidelity) {
    const double got = mub_average_fidelity([](const QuantumState& s) { return raman_transfer(s, 3, 0.992, 0); });
    EXPECT_NEAR(got, std::pow(0.992, 3), 1e-12);
}

TEST(AverageFidelity, BellFidelityOfChannelOnHalfPair) {
    // For a depolarizing channel of average fidelity F on one half,
    // the entanglement fidelity is (3F - 1)/2.
    const double f = 0.96;
    const auto out = average_fidelity_channel(quantum::bell_state(), f, 0);
    EXPECT_NEAR(quantum::bell_fidelity(out), (3 * f - 1) / 2, 1e-12);
}

TEST(NoiseParams, Validation) {
    NoiseParams p;
    EXPECT_NO_THROW(p.validate());
    p.t2 = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.raman_pi_fidelity = 1.2;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}
