#include "ionnode/budget.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ionnode::budget {

namespace {

void check_probability(double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(field) + ": must be in [0, 1]");
}

void check_positive(double v, const char* field) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(field) + ": must be > 0");
}

}  // namespace

NodeConfig NodeConfig::improved() const {
    if (!future) throw std::invalid_argument("future: config has no improvement block");
    NodeConfig c = *this;
    const Improvements& f = *future;
    if (f.objective_eff) c.objective_eff = *f.objective_eff;
    if (f.fiber_coupling) c.fiber_coupling = *f.fiber_coupling;
    if (f.conversion_eff) c.conversion_eff = *f.conversion_eff;
    if (f.fiber_transmission) c.fiber_transmission = *f.fiber_transmission;
    if (f.other_optics) c.other_optics = *f.other_optics;
    if (f.detector_eff) c.detector_eff = *f.detector_eff;
    if (f.attempt_rate) c.attempt_rate = *f.attempt_rate;
    if (f.multiplexing) c.multiplexing = *f.multiplexing;
    c.future.reset();
    return c;
}

void NodeConfig::validate() const {
    check_probability(branching_weight, "branching_weight");
    check_probability(excitation_prob, "excitation_prob");
    check_probability(objective_eff, "objective_eff");
    check_probability(fiber_coupling, "fiber_coupling");
    if (conversion_eff) check_probability(*conversion_eff, "conversion_eff");
    check_probability(fiber_transmission, "fiber_transmission");
    check_probability(other_optics, "other_optics");
    check_probability(detector_eff, "detector_eff");
    check_positive(attempt_rate, "attempt_rate");
    if (!(fiber_length >= 0.0)) throw std::invalid_argument("fiber_length: must be >= 0");
    check_positive(fiber_light_speed, "fiber_light_speed");
    check_positive(rate_ceiling, "rate_ceiling");
    if (!(multiplexing >= 1.0)) throw std::invalid_argument("multiplexing: must be >= 1");
    if (cooling_period_attempts < 1) throw std::invalid_argument("cooling_period_attempts: must be >= 1");
    if (!(cooling_time >= 0.0)) throw std::invalid_argument("cooling_time: must be >= 0");
    if (!(doppler_time >= 0.0)) throw std::invalid_argument("doppler_time: must be >= 0");
    if (!(eit_time >= 0.0)) throw std::invalid_argument("eit_time: must be >= 0");
    if (!(storage_time >= setup_time()))
        throw std::invalid_argument("storage_time: shorter than the cooling setup");
}

double stage_product(const NodeConfig& c) {
    double p = c.branching_weight * c.excitation_prob * c.objective_eff * c.fiber_coupling * c.fiber_transmission *
               c.other_optics * c.detector_eff;
    if (c.conversion_eff) p *= *c.conversion_eff;
    return p;
}

RateReport rate_budget(const NodeConfig& c) {
    RateReport r;
    r.stages = {{kBranchingRow, c.branching_weight}, {kExcitationRow, c.excitation_prob},
                {kObjectiveRow, c.objective_eff},    {kCouplingRow, c.fiber_coupling}};
    if (c.conversion_eff) r.stages.push_back({kConversionRow, *c.conversion_eff});
    r.stages.push_back({kFiberRow, c.fiber_transmission});
    r.stages.push_back({kOpticsRow, c.other_optics});
    r.stages.push_back({kDetectorRow, c.detector_eff});

    r.per_attempt_probability = stage_product(c);
    r.attempt_rate = c.attempt_rate;
    r.success_rate = c.attempt_rate * r.per_attempt_probability;
    r.attempt_rate_cap = c.multiplexing * attempt_rate_cap(c.fiber_length, c.fiber_light_speed, c.rate_ceiling);
    r.cap_utilization = c.attempt_rate / r.attempt_rate_cap;
    if (c.attempt_rate > r.attempt_rate_cap * (1.0 + 1e-12)) {
        std::ostringstream w;
        w << "attempt_rate " << c.attempt_rate << " Hz exceeds the round-trip cap " << r.attempt_rate_cap << " Hz";
        r.warnings.push_back(w.str());
    }
    return r;
}

RateReport rate_budget_future(const NodeConfig& config) { return rate_budget(config.improved()); }

double attempt_rate_cap(double length_m, double c_fiber, double ceiling) {
    if (!(length_m >= 0.0)) throw std::invalid_argument("attempt_rate_cap: negative length");
    if (length_m == 0.0) return ceiling;
    return std::min(ceiling, c_fiber / (2.0 * length_m));
}

InfidelityReport infidelity_budget(const std::vector<InfidelityTerm>& terms) {
    InfidelityReport r{terms, 0.0};
    for (const auto& t : terms) {
        if (!(t.value >= 0.0)) throw std::invalid_argument("infidelity term '" + t.name + "' is negative");
        r.total += t.value;
    }
    return r;
}

double decay_success_penalty(double window_s, double t1_prime, int n_memories) {
    if (!(window_s >= 0.0)) throw std::invalid_argument("decay_success_penalty: negative window");
    if (n_memories < 0) throw std::invalid_argument("decay_success_penalty: negative memory count");
    return -std::expm1(-n_memories * window_s / t1_prime);
}

}  // namespace ionnode::budget
