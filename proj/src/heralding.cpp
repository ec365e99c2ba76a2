#include "ionnode/heralding.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace ionnode::heralding {

using quantum::Complex;
using quantum::Ket;
using quantum::Subsystem;

namespace {

QuantumState relabel(const QuantumState& s, std::vector<Subsystem> subs) {
    if (s.is_pure()) return QuantumState::pure(std::move(subs), s.ket());
    return QuantumState::mixed(std::move(subs), s.density());
}

void check_efficiency(double eta, const char* who) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument(std::string(who) + ": efficiency outside [0, 1]");
}

// Diagonal projector on |n_c n_d> selecting a click pattern.
Matrix click_projector(bool c, bool d) {
    Matrix p = Matrix::Zero(9, 9);
    for (std::size_t nc = 0; nc < kFockDim; ++nc)
        for (std::size_t nd = 0; nd < kFockDim; ++nd)
            if ((nc > 0) == c && (nd > 0) == d) p(static_cast<Eigen::Index>(3 * nc + nd), static_cast<Eigen::Index>(3 * nc + nd)) = 1.0;
    return p;
}

Matrix one_photon_projector() {
    Matrix p = Matrix::Zero(9, 9);
    p(1, 1) = 1.0;  // |01>
    p(3, 3) = 1.0;  // |10>
    return p;
}

}  // namespace

QuantumState single_photon_joint_state(double chi) {
    if (!(chi >= 0.0 && chi <= 1.0)) throw std::invalid_argument("single_photon_joint_state: chi outside [0, 1]");
    // Single node: (ion, mode) with index 3*ion + n.
    Ket node = Ket::Zero(6);
    node(3 * 1 + 0) = std::sqrt(1.0 - chi);  // |down, 0>
    node(3 * 0 + 1) = std::sqrt(chi);        // |up, 1>
    const auto a = QuantumState::pure({{"ion_a", 2}, {"mode_a", kFockDim}}, node);
    const auto b = QuantumState::pure({{"ion_b", 2}, {"mode_b", kFockDim}}, node);
    const std::size_t order[] = {0, 2, 1, 3};
    return quantum::permute(quantum::tensor(a, b), order);
}

Matrix beamsplitter_matrix() {
    const double r = 1.0 / std::sqrt(2.0);
    auto idx = [](int na, int nb) { return static_cast<Eigen::Index>(3 * na + nb); };
    Matrix u = Matrix::Zero(9, 9);
    u(idx(0, 0), idx(0, 0)) = 1.0;
    // |10> -> (|10> + |01>)/sqrt2, |01> -> (|10> - |01>)/sqrt2
    u(idx(1, 0), idx(1, 0)) = r;
    u(idx(0, 1), idx(1, 0)) = r;
    u(idx(1, 0), idx(0, 1)) = r;
    u(idx(0, 1), idx(0, 1)) = -r;
    // |20> -> |20>/2 + |11>/sqrt2 + |02>/2
    u(idx(2, 0), idx(2, 0)) = 0.5;
    u(idx(1, 1), idx(2, 0)) = r;
    u(idx(0, 2), idx(2, 0)) = 0.5;
    // |11> -> (|20> - |02>)/sqrt2
    u(idx(2, 0), idx(1, 1)) = r;
    u(idx(0, 2), idx(1, 1)) = -r;
    // |02> -> |20>/2 - |11>/sqrt2 + |02>/2
    u(idx(2, 0), idx(0, 2)) = 0.5;
    u(idx(1, 1), idx(0, 2)) = -r;
    u(idx(0, 2), idx(0, 2)) = 0.5;
    for (auto [na, nb] : {std::pair{1, 2}, std::pair{2, 1}, std::pair{2, 2}}) u(idx(na, nb), idx(na, nb)) = 1.0;
    return u;
}

QuantumState beamsplitter(const QuantumState& state) {
    const std::size_t a = state.index_of("mode_a");
    const std::size_t b = state.index_of("mode_b");
    if (state.subsystems()[a].dim != kFockDim || state.subsystems()[b].dim != kFockDim)
        throw std::invalid_argument("beamsplitter: modes must be truncated at two photons");

    Matrix two = Matrix::Zero(3, 3);
    two(2, 2) = 1.0;
    const auto dims = state.dims();
    const Matrix rho = state.density();
    for (std::size_t m : {a, b}) {
        const std::size_t t[] = {m};
        const double pop = (quantum::embed(two, dims, t) * rho).trace().real();
        if (pop > 1e-12) throw std::invalid_argument("beamsplitter: more than one photon in an input mode");
    }

    const std::size_t targets[] = {a, b};
    auto out = quantum::apply_unitary(state, quantum::Unitary(beamsplitter_matrix()), targets);
    auto subs = out.subsystems();
    subs[a].label = "mode_c";
    subs[b].label = "mode_d";
    return relabel(out, std::move(subs));
}

std::vector<Matrix> loss_kraus(double eta) {
    check_efficiency(eta, "loss_kraus");
    std::vector<Matrix> k(3, Matrix::Zero(3, 3));
    k[0](0, 0) = 1.0;
    k[0](1, 1) = std::sqrt(eta);
    k[0](2, 2) = eta;
    k[1](0, 1) = std::sqrt(1.0 - eta);
    k[1](1, 2) = std::sqrt(2.0 * eta * (1.0 - eta));
    k[2](0, 2) = 1.0 - eta;
    return k;
}

std::vector<HeraldOutcome> herald_single_photon(double chi, double eta_a, double eta_b, double phase) {
    check_efficiency(eta_a, "herald_single_photon");
    check_efficiency(eta_b, "herald_single_photon");
    QuantumState s = single_photon_joint_state(chi);
    const std::size_t mode_a = s.index_of("mode_a");
    const std::size_t mode_b = s.index_of("mode_b");
    s = quantum::apply_channel(s, loss_kraus(eta_a), mode_a);
    s = quantum::apply_channel(s, loss_kraus(eta_b), mode_b);
    if (phase != 0.0) {
        Matrix ph = Matrix::Zero(3, 3);
        for (int n = 0; n < 3; ++n) ph(n, n) = std::polar(1.0, n * phase);
        const std::size_t t[] = {mode_b};
        s = quantum::apply_unitary(s, quantum::Unitary(ph), t);
    }
    s = beamsplitter(s);

    const std::size_t modes[] = {s.index_of("mode_c"), s.index_of("mode_d")};
    const std::size_t ions[] = {s.index_of("ion_a"), s.index_of("ion_b")};
    const auto dims = s.dims();
    const Matrix rho = s.density();
    const Matrix one = quantum::embed(one_photon_projector(), dims, modes);

    const std::vector<quantum::Projector> projectors{
        {click_projector(false, false), "none"},
        {click_projector(true, false), "c"},
        {click_projector(false, true), "d"},
        {click_projector(true, true), "cd"},
    };
    const auto m = quantum::measure_projective(s, projectors, modes);

    std::vector<HeraldOutcome> out;
    for (std::size_t i = 0; i < m.outcomes.size(); ++i) {
        const auto& br = m.outcomes[i];
        HeraldOutcome o{br.label, br.probability, 0.0, std::nullopt};
        const Matrix p = quantum::embed(projectors[i].matrix(), dims, modes);
        o.single_photon_probability = (p * one * rho).trace().real();
        if (br.state) o.post_state = quantum::partial_trace(*br.state, ions);
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<HeraldOutcome> herald_bsm(const QuantumState& state_a, const QuantumState& state_b, double eta_a,
                                      double eta_b) {
    check_efficiency(eta_a, "herald_bsm");
    check_efficiency(eta_b, "herald_bsm");
    for (const auto* s : {&state_a, &state_b}) {
        const auto d = s->dims();
        if (d.size() != 2 || d[0] != 2 || d[1] != 2)
            throw std::invalid_argument("herald_bsm: inputs must be (ion, photon) qubit pairs");
    }
    const auto a = relabel(state_a, {{"ion_a", 2}, {"photon_a", 2}});
    const auto b = relabel(state_b, {{"ion_b", 2}, {"photon_b", 2}});
    const std::size_t order[] = {0, 2, 1, 3};
    const auto joint = quantum::permute(quantum::tensor(a, b), order);

    const double r = 1.0 / std::sqrt(2.0);
    Ket psi_p = Ket::Zero(4), psi_m = Ket::Zero(4);
    psi_p(1) = r;  // |HV>
    psi_p(2) = r;  // |VH>
    psi_m(1) = r;
    psi_m(2) = -r;
    const std::vector<quantum::Projector> projectors{
        {psi_p * psi_p.adjoint(), "psi_plus"},
        {psi_m * psi_m.adjoint(), "psi_minus"},
    };
    const std::size_t photons[] = {2, 3};
    const std::size_t ions[] = {0, 1};
    const auto m = quantum::measure_projective(joint, projectors, photons);

    const double both = eta_a * eta_b;
    const Matrix ions_all = quantum::partial_trace(joint, ions).density();
    Matrix fail_rho = ions_all;
    std::vector<HeraldOutcome> out;
    double success = 0.0;
    for (const auto& br : m.outcomes) {
        HeraldOutcome o{br.label, both * br.probability, both * br.probability, std::nullopt};
        if (br.state && o.probability > 0.0) {
            o.post_state = quantum::partial_trace(*br.state, ions);
            fail_rho -= o.probability * o.post_state->density();
        }
        success += o.probability;
        out.push_back(std::move(o));
    }
    HeraldOutcome fail{"fail", 1.0 - success, 0.0, std::nullopt};
    if (fail.probability > 1e-15) {
        fail_rho = 0.5 * (fail_rho + fail_rho.adjoint()) / fail_rho.trace().real();
        fail.post_state = QuantumState::mixed({{"ion_a", 2}, {"ion_b", 2}}, fail_rho);
    }
    out.push_back(std::move(fail));
    return out;
}

DirectHerald direct_herald(const budget::NodeConfig& config, const noise::NoiseParams& noise) {
    auto s = quantum::bell_state();
    const std::size_t ion = s.index_of("ion");
    s = noise::raman_transfer(s, noise.raman_pulses, noise.raman_pi_fidelity, ion);
    s = noise::average_fidelity_channel(s, noise.merge_fidelity, ion);
    if (noise.snr) s = noise::snr_mixture(s, *noise.snr);
    return {budget::stage_product(config), std::move(s)};
}

nlohmann::json outcomes_to_json(const std::vector<HeraldOutcome>& outcomes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& o : outcomes) {
        nlohmann::json row{{"pattern", o.pattern},
                           {"probability", o.probability},
                           {"single_photon_probability", o.single_photon_probability}};
        if (o.post_state) {
            row["bell_fidelity"] = quantum::bell_fidelity(*o.post_state);
            row["post_state"] = quantum::to_json(*o.post_state);
        } else {
            row["bell_fidelity"] = nullptr;
        }
        arr.push_back(std::move(row));
    }
    return arr;
}

}  // namespace ionnode::heralding
