#include "ionnode/tomography.hpp"

#include "ionnode/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ionnode::tomography {

using quantum::Complex;
using quantum::Ket;

namespace {

// Eigenvector of a Pauli operator for eigenvalue +1 (sign 0) or -1 (sign 1).
Ket pauli_eigenvector(char axis, int sign) {
    const double h = 1.0 / std::sqrt(2.0);
    const double s = sign == 0 ? 1.0 : -1.0;
    Ket k(2);
    switch (axis) {
        case 'X': k << h, s * h; break;
        case 'Y': k << h, Complex(0, s * h); break;
        case 'Z': k << (sign == 0 ? 1.0 : 0.0), (sign == 0 ? 0.0 : 1.0); break;
        default: throw std::invalid_argument(std::string("unknown Pauli axis '") + axis + "'");
    }
    return k;
}

double correlator(const std::array<double, 4>& n) {
    const double total = n[0] + n[1] + n[2] + n[3];
    if (!(total > 0.0)) throw std::invalid_argument("visibilities: empty setting");
    return (n[0] - n[1] - n[2] + n[3]) / total;
}

Visibilities from_correlators(double xx, double yy, double zz) {
    auto sgn = [](double v) { return v < 0.0 ? -1 : 1; };
    return {std::abs(xx), std::abs(yy), std::abs(zz), {sgn(xx), sgn(yy), sgn(zz)}};
}

}  // namespace

std::vector<std::string> pauli_settings() {
    std::vector<std::string> s;
    for (char a : {'X', 'Y', 'Z'})
        for (char b : {'X', 'Y', 'Z'}) s.push_back(std::string{a, b});
    return s;
}

void CountTable::validate() const {
    if (settings.size() != counts.size()) throw std::invalid_argument("counts: one row per setting required");
    if (!(shots > 0.0)) throw std::invalid_argument("counts: shots must be > 0");
    for (std::size_t i = 0; i < settings.size(); ++i) {
        if (settings[i].size() != 2) throw std::invalid_argument("counts: setting '" + settings[i] + "' is not a Pauli pair");
        double total = 0.0;
        for (double n : counts[i]) {
            if (!(n >= 0.0)) throw std::invalid_argument("counts: negative count in " + settings[i]);
            total += n;
        }
        if (std::abs(total - shots) > 1e-6 * shots)
            throw std::invalid_argument("counts: setting " + settings[i] + " does not sum to shots");
    }
}

bool CountTable::complete() const {
    for (const auto& s : pauli_settings())
        if (std::find(settings.begin(), settings.end(), s) == settings.end()) return false;
    return true;
}

Matrix outcome_projector(const std::string& setting, int outcome) {
    if (setting.size() != 2 || outcome < 0 || outcome > 3) throw std::invalid_argument("bad setting/outcome");
    const Ket a = pauli_eigenvector(setting[0], outcome / 2);
    const Ket b = pauli_eigenvector(setting[1], outcome % 2);
    Ket ab(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) ab(2 * i + j) = a(i) * b(j);
    return ab * ab.adjoint();
}

CountTable exact_counts(const QuantumState& rho, const std::vector<std::string>& settings, double shots) {
    if (rho.dimension() != 4) throw std::invalid_argument("tomography: expected a two-qubit state");
    const Matrix r = rho.density();
    CountTable t{settings, {}, shots};
    for (const auto& s : settings) {
        std::array<double, 4> row{};
        for (int o = 0; o < 4; ++o) row[o] = shots * std::max(0.0, (outcome_projector(s, o) * r).trace().real());
        t.counts.push_back(row);
    }
    return t;
}

CountTable simulate_counts(const QuantumState& rho, const std::vector<std::string>& settings, std::uint64_t shots,
                           std::uint64_t seed) {
    const CountTable exact = exact_counts(rho, settings, 1.0);
    CountTable t{settings, {}, static_cast<double>(shots)};
    for (std::size_t i = 0; i < settings.size(); ++i) {
        std::array<double, 4> cdf{};
        double acc = 0.0;
        for (int o = 0; o < 4; ++o) cdf[o] = (acc += exact.counts[i][o]);
        std::array<double, 4> row{};
        Stream rng(seed, i);
        for (std::uint64_t n = 0; n < shots; ++n) {
            const double u = rng.uniform() * acc;
            int o = 0;
            while (o < 3 && u > cdf[o]) ++o;
            row[o] += 1.0;
        }
        t.counts.push_back(row);
    }
    return t;
}

double log_likelihood(const CountTable& counts, const Matrix& rho) {
    double ll = 0.0, total = 0.0;
    for (std::size_t i = 0; i < counts.settings.size(); ++i)
        for (int o = 0; o < 4; ++o) {
            const double n = counts.counts[i][o];
            if (n == 0.0) continue;
            const double p = (outcome_projector(counts.settings[i], o) * rho).trace().real();
            ll += n * std::log(std::max(p, std::numeric_limits<double>::min()));
            total += n;
        }
    return ll / total;
}

namespace {

struct Projectors {
    std::vector<Matrix> ops;
    std::vector<double> n;
};

Projectors flatten(const CountTable& counts) {
    Projectors p;
    for (std::size_t i = 0; i < counts.settings.size(); ++i)
        for (int o = 0; o < 4; ++o) {
            p.ops.push_back(outcome_projector(counts.settings[i], o));
            p.n.push_back(counts.counts[i][o]);
        }
    return p;
}

Matrix r_operator(const Projectors& p, const Matrix& rho) {
    Matrix r = Matrix::Zero(4, 4);
    for (std::size_t k = 0; k < p.ops.size(); ++k) {
        if (p.n[k] == 0.0) continue;
        const double prob = std::max((p.ops[k] * rho).trace().real(), std::numeric_limits<double>::min());
        r += (p.n[k] / prob) * p.ops[k];
    }
    return r;
}

double ll_of(const Projectors& p, const Matrix& rho) {
    double ll = 0.0, total = 0.0;
    for (std::size_t k = 0; k < p.ops.size(); ++k) {
        if (p.n[k] == 0.0) continue;
        ll += p.n[k] * std::log(std::max((p.ops[k] * rho).trace().real(), std::numeric_limits<double>::min()));
        total += p.n[k];
    }
    return ll / total;
}

Matrix normalized(const Matrix& m) {
    Matrix h = 0.5 * (m + m.adjoint());
    return h / h.trace().real();
}

}  // namespace

Matrix rrhor_step(const CountTable& counts, const Matrix& rho) {
    const auto p = flatten(counts);
    const Matrix r = r_operator(p, rho);
    return normalized(r * rho * r);
}

MleResult mle_reconstruct(const CountTable& counts, const MleOptions& options) {
    counts.validate();
    if (!counts.complete()) throw std::invalid_argument("mle_reconstruct: setting set is not tomographically complete");
    const auto p = flatten(counts);
    double total = 0.0;
    for (double n : p.n) total += n;

    Matrix rho = Matrix::Identity(4, 4) / 4.0;
    double ll = ll_of(p, rho);
    MleResult res{QuantumState::mixed({{"q0", 2}, {"q1", 2}}, rho), 0, false, {ll}};

    for (int it = 1; it <= options.max_iterations; ++it) {
        // Scaled so that R = I at the fixed point.
        const Matrix r = r_operator(p, rho) / total;
        Matrix next = normalized(r * rho * r);
        double next_ll = ll_of(p, next);
        // Dilute the step toward the identity until the likelihood does not drop.
        double eps = 1.0;
        const Matrix id = Matrix::Identity(4, 4);
        while (next_ll < ll && eps > 1e-12) {
            eps *= 0.5;
            const Matrix g = (1.0 - eps) * id + eps * r;
            next = normalized(g * rho * g);
            next_ll = ll_of(p, next);
        }
        if (next_ll < ll) break;
        const double change = next_ll - ll;
        rho = next;
        ll = next_ll;
        res.log_likelihood.push_back(ll);
        res.iterations = it;
        const double residual = ((r_operator(p, rho) / total) * rho - rho).cwiseAbs().maxCoeff();
        if (change < options.tolerance && residual < options.residual_tolerance) {
            res.converged = true;
            break;
        }
    }
    res.state = QuantumState::mixed({{"q0", 2}, {"q1", 2}}, rho);
    return res;
}

Visibilities visibilities(const CountTable& counts) {
    auto find = [&](const char* s) -> const std::array<double, 4>& {
        for (std::size_t i = 0; i < counts.settings.size(); ++i)
            if (counts.settings[i] == s) return counts.counts[i];
        throw std::invalid_argument(std::string("visibilities: missing setting ") + s);
    };
    return from_correlators(correlator(find("XX")), correlator(find("YY")), correlator(find("ZZ")));
}

Visibilities visibilities(const QuantumState& rho) {
    if (rho.dimension() != 4) throw std::invalid_argument("visibilities: expected a two-qubit state");
    const auto c = exact_counts(rho, {"XX", "YY", "ZZ"}, 1.0);
    return from_correlators(correlator(c.counts[0]), correlator(c.counts[1]), correlator(c.counts[2]));
}

PhaseScanFit fit_phase_scan(const std::vector<double>& phases, const std::vector<double>& n_plus,
                            const std::vector<double>& n_total) {
    const std::size_t m = phases.size();
    if (n_plus.size() != m || n_total.size() != m) throw std::invalid_argument("fit_phase_scan: length mismatch");
    if (m < 4) throw std::invalid_argument("fit_phase_scan: need at least four phase points");
    // y = c + a cos(phi) + b sin(phi), weights from binomial variance.
    Eigen::MatrixXd design(m, 3);
    Eigen::VectorXd y(m), w(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(n_total[i] > 0.0)) throw std::invalid_argument("fit_phase_scan: empty phase point");
        const double f = n_plus[i] / n_total[i];
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(phases[i]);
        design(i, 2) = std::sin(phases[i]);
        y(i) = f;
        const double var = std::max(f * (1.0 - f), 0.25 / n_total[i]) / n_total[i];
        w(i) = 1.0 / var;
    }
    const Eigen::MatrixXd normal = design.transpose() * w.asDiagonal() * design;
    const Eigen::VectorXd beta = normal.ldlt().solve(design.transpose() * w.asDiagonal() * y);
    const Eigen::MatrixXd cov = normal.inverse();
    const double a = beta(1), b = beta(2);
    const double amp = std::hypot(a, b);
    PhaseScanFit fit;
    fit.offset = beta(0);
    fit.visibility = 2.0 * amp;
    fit.phase = std::atan2(-b, a);
    if (amp > 0.0) {
        const double da = a / amp, db = b / amp;
        fit.visibility_error = 2.0 * std::sqrt(da * da * cov(1, 1) + 2.0 * da * db * cov(1, 2) + db * db * cov(2, 2));
    }
    return fit;
}

nlohmann::json to_json(const CountTable& counts) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < counts.settings.size(); ++i)
        rows.push_back({{"setting", counts.settings[i]}, {"counts", counts.counts[i]}});
    return {{"shots", counts.shots}, {"settings", rows}};
}

CountTable counts_from_json(const nlohmann::json& doc) {
    CountTable t;
    t.shots = doc.at("shots").get<double>();
    for (const auto& row : doc.at("settings")) {
        t.settings.push_back(row.at("setting").get<std::string>());
        t.counts.push_back(row.at("counts").get<std::array<double, 4>>());
    }
    t.validate();
    return t;
}

}  // namespace ionnode::tomography
