#include "ionnode/crosstalk.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ionnode::crosstalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPlanck = 6.62607015e-34;
constexpr double kHbar = kPlanck / kTwoPi;

}  // namespace

std::string CrosstalkParams::validate() const {
    for (auto [v, name] : {std::pair{omega, "omega"}, {delta, "delta"}, {gamma, "gamma"}, {tau, "tau"},
                           {pol_coeff, "pol_coeff"}, {echo_alpha, "echo_alpha"}, {attempt_rate, "attempt_rate"},
                           {ops_per_attempt, "ops_per_attempt"}})
        if (!(v >= 0.0)) throw std::invalid_argument(std::string(name) + ": must be >= 0");
    if (delta > 0.0 && omega / delta > 0.1) return "omega/delta > 0.1, far-detuned approximation is poor";
    return {};
}

double offres_excitation(double omega, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("offres_excitation: delta must be > 0");
    return omega * omega / (2.0 * omega * omega + 4.0 * delta * delta);
}

double scattering_error(const CrosstalkParams& p) {
    if (!(p.delta > 0.0)) throw std::invalid_argument("scattering_error: delta must be > 0");
    const double ratio = p.omega / p.delta;
    return ratio * ratio / 4.0 * p.gamma * p.tau;
}

double scattering_rate(const CrosstalkParams& p) { return scattering_error(p) * p.attempt_rate * p.ops_per_attempt; }

double stark_phase(const CrosstalkParams& p) {
    if (!(p.delta > 0.0)) throw std::invalid_argument("stark_phase: delta must be > 0");
    const double w = kTwoPi * p.omega;
    const double d = kTwoPi * p.delta;
    return w * w / (4.0 * d) * p.tau * p.pol_coeff * p.echo_alpha;
}

double stark_phase_rate(const CrosstalkParams& p) { return stark_phase(p) * p.attempt_rate * p.ops_per_attempt; }

double rabi_scale_gaussian(double separation, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("rabi_scale_gaussian: radius must be > 0");
    return std::exp(-(separation * separation) / (radius * radius));
}

void HeatingParams::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda: must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("mass: must be > 0");
    if (!(p_excite >= 0.0 && p_excite <= 1.0)) throw std::invalid_argument("p_excite: must be in [0, 1]");
    if (n_modes < 1 || n_modes % 3 != 0) throw std::invalid_argument("n_modes: must be a positive multiple of 3");
    for (std::size_t i = 0; i < mode_freqs.size(); ++i)
        if (!(mode_freqs[i] > 0.0))
            throw std::invalid_argument("mode_freqs[" + std::to_string(i) + "]: must be > 0");
    if (!(pump_survival >= 0.0 && pump_survival <= 1.0)) throw std::invalid_argument("pump_survival: must be in [0, 1]");
    if (n_pump_rounds < 0) throw std::invalid_argument("n_pump_rounds: must be >= 0");
}

namespace {

double recoil_energy_per_photon(const HeatingParams& hp) {
    const double k = kPlanck / hp.lambda;
    return k * k / (2.0 * hp.mass);
}

std::vector<double> phonons(double energy, const HeatingParams& hp) {
    std::vector<double> out;
    for (double f : hp.mode_freqs) out.push_back(energy / hp.n_modes / (kHbar * kTwoPi * f));
    return out;
}

}  // namespace

RecoilHeating recoil_heating(const HeatingParams& hp) {
    hp.validate();
    const double e = hp.p_excite * recoil_energy_per_photon(hp);
    return {e, phonons(e, hp)};
}

double pumping_photon_count(double survival, int rounds, double initial_unwanted) {
    if (rounds < 0) throw std::invalid_argument("pumping_photon_count: negative rounds");
    if (!(survival >= 0.0 && survival <= 1.0)) throw std::invalid_argument("pumping_photon_count: survival outside [0, 1]");
    // Photon count k < rounds ends with a transfer; k = rounds is the cutoff.
    double expected = 0.0;
    double still_unwanted = 1.0;
    for (int k = 1; k <= rounds; ++k) {
        const double ends_here = (k < rounds) ? still_unwanted * (1.0 - survival) : still_unwanted;
        expected += k * ends_here;
        still_unwanted *= survival;
    }
    return initial_unwanted * expected;
}

std::vector<double> combined_heating(const HeatingParams& hp) {
    hp.validate();
    const double photons = hp.p_excite + pumping_photon_count(hp.pump_survival, hp.n_pump_rounds, hp.initial_unwanted);
    return phonons(photons * recoil_energy_per_photon(hp), hp);
}

PhononRange equilibrium_phonons(double base_nbar, double heat_per_attempt, int attempts_between_cooling) {
    if (!(base_nbar >= 0.0) || !(heat_per_attempt >= 0.0) || attempts_between_cooling < 0)
        throw std::invalid_argument("equilibrium_phonons: arguments must be >= 0");
    const double gained = heat_per_attempt * attempts_between_cooling;
    return {base_nbar, base_nbar + gained, base_nbar + gained / 2.0};
}

Ledger crosstalk_ledger(const std::vector<Operation>& ops) {
    Ledger l;
    l.total.name = "Total influence";
    for (const auto& op : ops) {
        LedgerRow row;
        row.name = op.name;
        for (const auto& beam : op.beams) {
            if (auto w = beam.validate(); !w.empty()) l.warnings.push_back(op.name + ": " + w);
            row.decay_per_op += scattering_error(beam);
            row.decay_rate += scattering_rate(beam);
            CrosstalkParams at_memory = beam;
            at_memory.omega *= op.memory_scale;
            row.phase_per_op += stark_phase(at_memory);
            row.phase_rate += stark_phase_rate(at_memory);
        }
        l.total.decay_rate += row.decay_rate;
        l.total.phase_rate += row.phase_rate;
        l.rows.push_back(std::move(row));
    }
    return l;
}

nlohmann::json to_json(const Ledger& ledger) {
    auto row_json = [](const LedgerRow& r) {
        return nlohmann::json{{"operation", r.name},
                              {"decay_per_op", r.decay_per_op},
                              {"decay_rate_per_s", r.decay_rate},
                              {"phase_per_op_rad", r.phase_per_op},
                              {"phase_rate_rad_per_s", r.phase_rate}};
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : ledger.rows) rows.push_back(row_json(r));
    return {{"rows", rows}, {"total", row_json(ledger.total)}, {"warnings", ledger.warnings}};
}

}  // namespace ionnode::crosstalk
