#include "ionnode/crosstalk.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace ionnode::crosstalk;

namespace {

CrosstalkParams ps_pulse() {
    CrosstalkParams p;
    p.omega = 5e10;
    p.delta = 4.04e14;
    p.gamma = 1.445e8;
    p.tau = 1e-11;
    p.pol_coeff = 0.4;
    p.echo_alpha = 1.0;
    p.attempt_rate = 5e3;
    return p;
}

// Brute-force chain over pumping rounds: each round the unwanted population
// scatters a photon, then either stays unwanted or is transferred.
double pumping_chain(double survival, int rounds, double initial) {
    std::function<double(int, double)> step = [&](int round, double weight) -> double {
        if (round == rounds || weight == 0.0) return 0.0;
        return weight + step(round + 1, weight * survival);
    };
    return step(0, initial);
}

double log_slope(const std::function<double(double)>& f, double x) {
    const double h = 1e-3;
    return (std::log(f(x * std::exp(h))) - std::log(f(x * std::exp(-h)))) / (2 * h);
}

}  // namespace

TEST(OffResonant, ExactForm) {
    EXPECT_NEAR(offres_excitation(1.0, 1.0), 1.0 / 6.0, 1e-15);
    EXPECT_EQ(offres_excitation(0.0, 3.0), 0.0);
    EXPECT_NEAR(offres_excitation(1e-3, 1.0) / (1e-6 / 4), 1.0, 1e-6);
    EXPECT_THROW(offres_excitation(1.0, 0.0), std::invalid_argument);
}

TEST(Scattering, PicosecondPulse) {
    const auto p = ps_pulse();
    const double ratio = p.omega / p.delta;
    EXPECT_NEAR(scattering_error(p), ratio * ratio / 4 * p.gamma * p.tau, 1e-25);
    EXPECT_NEAR(scattering_rate(p), scattering_error(p) * 5e3, 1e-20);
    auto z = p;
    z.tau = 0.0;
    EXPECT_EQ(scattering_error(z), 0.0);
}

TEST(Stark, ZeroPolarizationCoefficient) {
    auto p = ps_pulse();
    p.pol_coeff = 0.0;
    EXPECT_EQ(stark_phase(p), 0.0);
}

TEST(Scaling, QuadraticInOmegaInverseInDelta) {
    const auto base = ps_pulse();
    auto with_omega = [&](auto fn) {
        return [=](double w) {
            auto p = base;
            p.omega = w;
            return fn(p);
        };
    };
    auto with_delta = [&](auto fn) {
        return [=](double d) {
            auto p = base;
            p.delta = d;
            return fn(p);
        };
    };
    EXPECT_NEAR(log_slope(with_omega(scattering_error), base.omega), 2.0, 1e-6);
    EXPECT_NEAR(log_slope(with_omega(stark_phase), base.omega), 2.0, 1e-6);
    EXPECT_NEAR(log_slope(with_delta(scattering_error), base.delta), -2.0, 1e-6);
    EXPECT_NEAR(log_slope(with_delta(stark_phase), base.delta), -1.0, 1e-6);
}

TEST(Geometry, GaussianFalloff) {
    EXPECT_NEAR(rabi_scale_gaussian(9e-6, 10e-6), std::exp(-0.81), 1e-15);
    EXPECT_DOUBLE_EQ(rabi_scale_gaussian(0.0, 10e-6), 1.0);
    EXPECT_THROW(rabi_scale_gaussian(1.0, 0.0), std::invalid_argument);
}

TEST(Validation, FarDetunedWarning) {
    auto p = ps_pulse();
    EXPECT_TRUE(p.validate().empty());
    p.omega = 0.2 * p.delta;
    EXPECT_FALSE(p.validate().empty());
    p.tau = -1.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Pumping, MatchesChainEnumeration) {
    for (double s : {0.0, 0.3, 2.0 / 3.0, 0.9, 1.0})
        for (int n : {0, 1, 2, 5, 9}) EXPECT_NEAR(pumping_photon_count(s, n, 1.0 / 3.0), pumping_chain(s, n, 1.0 / 3.0), 1e-14);
}

TEST(Pumping, FiveRoundSeries) {
    // 2/3 * 0 + (1/3)^2 [1 + 2 (2/3) + 3 (2/3)^2 + 4 (2/3)^3] + (1/3)(2/3)^4 5
    const double q = 2.0 / 3.0;
    const double series = (1.0 / 9) * (1 + 2 * q + 3 * q * q + 4 * q * q * q) + (1.0 / 3) * std::pow(q, 4) * 5;
    EXPECT_NEAR(pumping_photon_count(), series, 1e-14);
    EXPECT_EQ(pumping_photon_count(q, 0), 0.0);
    EXPECT_NEAR(pumping_photon_count(0.0, 5), 1.0 / 3.0, 1e-15);
}

TEST(Pumping, MonotoneAndBoundedByInfiniteSeries) {
    const double q = 2.0 / 3.0;
    const double limit = (1.0 / 3.0) / (1 - q);
    double prev = 0.0;
    for (int n = 0; n < 60; ++n) {
        const double v = pumping_photon_count(q, n);
        EXPECT_GE(v, prev);
        EXPECT_LE(v, limit + 1e-12);
        prev = v;
    }
}

TEST(Recoil, EnergyAndPhonons) {
    HeatingParams hp;
    hp.mode_freqs = {1.65e6};
    const auto r = recoil_heating(hp);
    const double h = 6.62607015e-34;
    const double k = h / 397e-9;
    EXPECT_NEAR(r.energy, 0.95 * k * k / (2 * 40 * 1.66053906660e-27), 1e-40);
    EXPECT_NEAR(r.phonons_per_mode[0], r.energy / 6 / (h * 1.65e6), 1e-15);
    hp.p_excite = 0.0;
    EXPECT_EQ(recoil_heating(hp).energy, 0.0);
}

TEST(Recoil, ModeSumRecoversEnergy) {
    HeatingParams hp;
    hp.mode_freqs = {1.65e6, 1.55e6, 1.57e6, 1.47e6, 1.6e6, 1.5e6};
    const auto r = recoil_heating(hp);
    const double hbar_omega = 6.62607015e-34 * 1.5583333e6;  // mean frequency
    double sum = 0.0;
    for (double n : r.phonons_per_mode) sum += n;
    EXPECT_NEAR(sum * hbar_omega / r.energy, 1.0, 0.01);
}

TEST(Equilibrium, Range) {
    const auto e = equilibrium_phonons(0.26, 6e-3, 100);
    EXPECT_NEAR(e.min, 0.26, 1e-15);
    EXPECT_NEAR(e.max, 0.86, 1e-15);
    EXPECT_NEAR(e.mean, 0.56, 1e-15);
    EXPECT_NEAR(equilibrium_phonons(0.0, 6e-3, 100).mean, 0.30, 1e-15);
    const auto flat = equilibrium_phonons(0.4, 0.0, 100);
    EXPECT_EQ(flat.min, flat.max);
}

TEST(Ledger, TotalsAddUp) {
    auto a = ps_pulse();
    auto b = ps_pulse();
    b.omega = 1e7;
    b.ops_per_attempt = 0.01;
    const auto l = crosstalk_ledger({{"one", {a}, 0.44}, {"two", {a, b}, 1.0}});
    ASSERT_EQ(l.rows.size(), 2u);
    EXPECT_NEAR(l.total.decay_rate, l.rows[0].decay_rate + l.rows[1].decay_rate, 1e-24);
    EXPECT_NEAR(l.total.phase_rate, l.rows[0].phase_rate + l.rows[1].phase_rate, 1e-18);
    EXPECT_NEAR(l.rows[0].phase_per_op / stark_phase(a), 0.44 * 0.44, 1e-12);
    EXPECT_EQ(l.total.name, "Total influence");
}
