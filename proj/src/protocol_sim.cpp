#include "ionnode/protocol_sim.hpp"

#include "ionnode/heralding.hpp"
#include "ionnode/numerics.hpp"
#include "ionnode/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace ionnode::sim {

namespace {

// Runs body(i) for i in [0, n) over contiguous chunks, one per worker.
template <class Body>
void parallel_for(std::uint64_t n, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || n < 2 * workers) {
        for (std::uint64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = w * chunk;
        const std::uint64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::uint64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

double dephased_bell_fidelity(double t, double t2) { return 0.5 * (1.0 + std::exp(-(t / t2) * (t / t2))); }

double cooling_charge(const budget::NodeConfig& c) { return c.rate_includes_overhead ? 0.0 : c.cooling_time; }

}  // namespace

Wait sample_wait(double p, double attempt_period, int cooling_every, double cooling_time, Stream& rng) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("waiting_time_sampler: p must be in (0, 1]");
    if (cooling_every < 1) throw std::invalid_argument("waiting_time_sampler: cooling period must be >= 1");
    const std::uint64_t k = rng.geometric(p);
    const auto breaks = static_cast<double>(k / static_cast<std::uint64_t>(cooling_every));
    return {k, static_cast<double>(k) * attempt_period + breaks * cooling_time};
}

double waiting_time_sampler(double p, double attempt_period, int cooling_every, double cooling_time, Stream& rng) {
    return sample_wait(p, attempt_period, cooling_every, cooling_time, rng).time;
}

double mean_waiting_time(double p, double attempt_period, int cooling_every, double cooling_time) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("mean_waiting_time: p must be in (0, 1]");
    // E[floor(k/N)] = sum_j P(k >= jN) = q^(N-1) / (1 - q^N), q = 1 - p.
    const double q = 1.0 - p;
    const double breaks = (p == 1.0) ? (cooling_every == 1 ? 1.0 : 0.0)
                                     : std::pow(q, cooling_every - 1) / -std::expm1(cooling_every * std::log1p(-p));
    return attempt_period / p + breaks * cooling_time;
}

std::vector<TrialRecord> run_node_sequence(const budget::NodeConfig& config, const noise::NoiseParams& noise,
                                           std::uint64_t seed, std::uint64_t n_sequences, unsigned workers) {
    config.validate();
    noise.validate();
    const auto herald = heralding::direct_herald(config, noise);
    const double p = herald.probability;
    if (!(p > 0.0)) throw std::invalid_argument("run_node_sequence: per-attempt success probability is zero");
    const double bell = quantum::bell_fidelity(herald.state);
    const double period = 1.0 / config.attempt_rate;
    const double cooling = cooling_charge(config);
    const double survival = noise::metastable_decay(config.storage_time, noise.t1_prime);
    const double memory = noise::storage_fidelity(config.storage_time, noise);

    std::vector<TrialRecord> out(n_sequences);
    parallel_for(n_sequences, workers, [&](std::uint64_t i) {
        Stream rng(seed, i);
        const Wait w = sample_wait(p, period, config.cooling_period_attempts, cooling, rng);
        TrialRecord& r = out[i];
        r.sequence = i;
        r.attempts = w.attempts;
        r.herald_time = config.setup_time() + w.time;
        r.block_index = w.attempts / static_cast<std::uint64_t>(config.cooling_period_attempts);
        r.memory_elapsed = config.storage_time;
        r.decayed = !rng.bernoulli(survival);
        if (!r.decayed) {
            r.bell_fidelity = bell;
            r.memory_fidelity = memory;
        } else {
            r.pattern = "decayed";
        }
    });
    return out;
}

NodeSummary summarize(const std::vector<TrialRecord>& records, const budget::NodeConfig& config,
                      const noise::NoiseParams& noise) {
    NodeSummary s;
    s.sequences = records.size();
    for (const auto& r : records) {
        s.attempts += r.attempts;
        s.attempt_time += r.herald_time - config.setup_time();
        if (r.decayed) ++s.decayed;
    }
    s.per_attempt_probability = budget::stage_product(config);
    s.herald_rate = s.attempt_time > 0.0 ? static_cast<double>(s.sequences) / s.attempt_time : 0.0;
    s.analytic_herald_rate = 1.0 / mean_waiting_time(s.per_attempt_probability, 1.0 / config.attempt_rate,
                                                     config.cooling_period_attempts, cooling_charge(config));
    s.decay_fraction = s.sequences ? static_cast<double>(s.decayed) / static_cast<double>(s.sequences) : 0.0;
    s.analytic_decay_fraction = 1.0 - noise::metastable_decay(config.storage_time, noise.t1_prime);
    return s;
}

double swap_fidelity(double t, double t2) {
    using quantum::Ket;
    auto link1 = quantum::bell_state();
    link1 = noise::gaussian_dephasing(link1, t, t2, link1.index_of("ion"));
    const auto link2 = quantum::bell_state();
    // (ion1, photon1, ion2, photon2) -> (ion1, ion2, photon1, photon2)
    const std::size_t order[] = {0, 2, 1, 3};
    const auto joint = quantum::permute(quantum::tensor(link1, link2), order);

    Ket phi = Ket::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    const std::vector<quantum::Projector> bell{{phi * phi.adjoint(), "phi_plus"}};
    const std::size_t ions[] = {0, 1};
    const auto m = quantum::measure_projective(joint, bell, ions);
    const std::size_t photons[] = {2, 3};
    const auto out = quantum::partial_trace(*m.outcomes.front().state, photons);
    return quantum::fidelity_to_pure(out, phi);
}

std::vector<SwapResult> swap_experiment(const budget::NodeConfig& config_a, const budget::NodeConfig& config_b,
                                        const SwapConfig& swap, std::uint64_t seed, std::uint64_t n_trials,
                                        unsigned workers) {
    config_a.validate();
    config_b.validate();
    const double p = budget::stage_product(config_b);
    if (!(p > 0.0)) throw std::invalid_argument("swap_experiment: node b never heralds");
    const double period = 1.0 / config_b.attempt_rate;
    const double cooling = cooling_charge(config_b);
    const double eps = 1.0 - (1.0 - swap.ms_gate_infidelity) * (1.0 - swap.detection_infidelity);

    std::vector<SwapResult> out(n_trials);
    parallel_for(n_trials, workers, [&](std::uint64_t i) {
        Stream rng(seed, i);
        SwapResult& r = out[i];
        r.waiting_time = waiting_time_sampler(p, period, config_b.cooling_period_attempts, cooling, rng);
        r.success = rng.bernoulli(std::exp(-r.waiting_time / swap.t1_prime));
        if (r.success) r.fidelity = (1.0 - eps) * dephased_bell_fidelity(r.waiting_time, swap.t2) + eps / 4.0;
    });
    return out;
}

double swap_success(double rate, double t1_prime) { return rate / (rate + 1.0 / t1_prime); }

double swap_curve_fidelity(double rate, double t1_prime, double t2, bool conditioned) {
    const double lambda = conditioned ? rate + 1.0 / t1_prime : rate;
    const double x = lambda * t2;
    return 0.5 * (1.0 + 0.5 * std::sqrt(std::numbers::pi) * x * erfcx(0.5 * x));
}

std::vector<SwapPoint> swap_curve(const std::vector<double>& rates, double t1_prime, double t2,
                                  const SwapCurveOptions& options) {
    std::vector<SwapPoint> out;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        const double rate = rates[k];
        if (!(rate > 0.0)) throw std::invalid_argument("swap_curve: rates must be > 0");
        SwapPoint pt{rate, swap_success(rate, t1_prime), swap_curve_fidelity(rate, t1_prime, t2, options.conditioned),
                     0.0, 0.0};
        if (options.mc_trials > 0) {
            const double attempt_rate = std::max(options.attempt_rate, rate);
            const double p = rate / attempt_rate;
            const double period = 1.0 / attempt_rate;
            std::vector<double> fid(options.mc_trials);
            std::vector<char> ok(options.mc_trials);
            const std::uint64_t base = k * options.mc_trials;
            parallel_for(options.mc_trials, options.workers, [&](std::uint64_t i) {
                Stream rng(options.seed, base + i);
                const double t = waiting_time_sampler(p, period, 1, 0.0, rng);
                ok[i] = rng.bernoulli(std::exp(-t / t1_prime));
                fid[i] = dephased_bell_fidelity(t, t2);
            });
            double successes = 0.0, fsum = 0.0, counted = 0.0;
            for (std::uint64_t i = 0; i < options.mc_trials; ++i) {
                successes += ok[i];
                if (ok[i] || !options.conditioned) {
                    fsum += fid[i];
                    counted += 1.0;
                }
            }
            pt.mc_success = successes / static_cast<double>(options.mc_trials);
            pt.mc_fidelity = counted > 0.0 ? fsum / counted : std::nan("");
        }
        out.push_back(pt);
    }
    return out;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi >= lo)) throw std::invalid_argument("log_space: need 0 < lo <= hi");
    std::vector<double> v;
    if (n == 0) return v;
    if (n == 1) return {lo};
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) v.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(i) / (n - 1)));
    return v;
}

}  // namespace ionnode::sim
