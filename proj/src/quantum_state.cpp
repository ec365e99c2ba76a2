#include "ionnode/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ionnode::quantum {

namespace {

constexpr double kConstructTolerance = 1e-10;

std::vector<std::size_t> dims_of(const std::vector<Subsystem>& subsystems) {
    std::vector<std::size_t> dims;
    dims.reserve(subsystems.size());
    for (const auto& s : subsystems) dims.push_back(s.dim);
    return dims;
}

void check_subsystems(const std::vector<Subsystem>& subsystems) {
    if (subsystems.empty()) throw std::invalid_argument("state needs at least one subsystem");
    std::size_t total = 1;
    for (const auto& s : subsystems) {
        if (s.dim == 0) throw std::invalid_argument("subsystem '" + s.label + "' has zero dimension");
        total *= s.dim;
        if (total > kMaxDimension)
            throw std::invalid_argument("Hilbert-space dimension exceeds " + std::to_string(kMaxDimension));
    }
}

// Mixed-radix digits, most significant first.
void to_digits(std::size_t index, std::span<const std::size_t> dims, std::span<std::size_t> digits) {
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
}

std::size_t from_digits(std::span<const std::size_t> digits, std::span<const std::size_t> dims) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
    return index;
}

// Operator acting on one subsystem, lifted to the full space. `op` may be
// rectangular: rows index the new subsystem, columns the old one.
Matrix lift_single(const Matrix& op, std::span<const std::size_t> dims, std::size_t target) {
    if (target >= dims.size()) throw std::out_of_range("target subsystem out of range");
    if (static_cast<std::size_t>(op.cols()) != dims[target])
        throw std::invalid_argument("operator does not match subsystem dimension");
    std::vector<std::size_t> new_dims(dims.begin(), dims.end());
    new_dims[target] = static_cast<std::size_t>(op.rows());
    const std::size_t d_old = total_dimension(dims);
    const std::size_t d_new = total_dimension(new_dims);

    Matrix full = Matrix::Zero(static_cast<Eigen::Index>(d_new), static_cast<Eigen::Index>(d_old));
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t j = 0; j < d_old; ++j) {
        to_digits(j, dims, digits);
        const std::size_t col = digits[target];
        for (Eigen::Index r = 0; r < op.rows(); ++r) {
            const Complex v = op(r, static_cast<Eigen::Index>(col));
            if (v == Complex{}) continue;
            digits[target] = static_cast<std::size_t>(r);
            full(static_cast<Eigen::Index>(from_digits(digits, new_dims)), static_cast<Eigen::Index>(j)) = v;
        }
        digits[target] = col;
    }
    return full;
}

}  // namespace

// ------------------------------------------------------------ QuantumState

QuantumState QuantumState::pure(std::vector<Subsystem> subsystems, Ket amplitudes) {
    check_subsystems(subsystems);
    const auto dims = dims_of(subsystems);
    const std::size_t d = total_dimension(dims);
    if (static_cast<std::size_t>(amplitudes.size()) != d)
        throw std::invalid_argument("amplitude count does not match subsystem dimensions");
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > kConstructTolerance)
        throw std::invalid_argument("pure state is not normalized (norm " + std::to_string(norm) + ")");
    QuantumState s;
    s.subsystems_ = std::move(subsystems);
    s.dimension_ = d;
    s.ket_ = amplitudes / norm;
    return s;
}

QuantumState QuantumState::mixed(std::vector<Subsystem> subsystems, Matrix rho) {
    check_subsystems(subsystems);
    const auto dims = dims_of(subsystems);
    const std::size_t d = total_dimension(dims);
    if (static_cast<std::size_t>(rho.rows()) != d || static_cast<std::size_t>(rho.cols()) != d)
        throw std::invalid_argument("density matrix does not match subsystem dimensions");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kConstructTolerance)
        throw std::invalid_argument("density matrix is not Hermitian");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > kConstructTolerance)
        throw std::invalid_argument("density matrix trace is " + std::to_string(tr));
    QuantumState s;
    s.subsystems_ = std::move(subsystems);
    s.dimension_ = d;
    s.rho_ = (rho + rho.adjoint()) / (2.0 * tr);
    return s;
}

const Ket& QuantumState::ket() const {
    if (!ket_) throw std::logic_error("state is mixed");
    return *ket_;
}

Matrix QuantumState::density() const {
    if (ket_) return (*ket_) * ket_->adjoint();
    return rho_;
}

QuantumState QuantumState::as_mixed() const {
    if (!ket_) return *this;
    return mixed(subsystems_, density());
}

std::vector<std::size_t> QuantumState::dims() const { return dims_of(subsystems_); }

std::size_t QuantumState::index_of(std::string_view label) const {
    for (std::size_t k = 0; k < subsystems_.size(); ++k)
        if (subsystems_[k].label == label) return k;
    throw std::invalid_argument("no subsystem labelled '" + std::string(label) + "'");
}

double QuantumState::population(std::span<const std::size_t> levels) const {
    const auto d = dims();
    if (levels.size() != d.size()) throw std::invalid_argument("one level per subsystem required");
    for (std::size_t k = 0; k < d.size(); ++k)
        if (levels[k] >= d[k]) throw std::out_of_range("level out of range");
    const auto i = static_cast<Eigen::Index>(from_digits(levels, d));
    if (ket_) return std::norm((*ket_)(i));
    return rho_(i, i).real();
}

void QuantumState::validate() const {
    if (ket_) {
        if (std::abs(ket_->norm() - 1.0) > 1e-12) throw std::logic_error("pure state norm drifted");
        return;
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw std::logic_error("rho not Hermitian");
    if (std::abs(rho_.trace().real() - 1.0) > 1e-12) throw std::logic_error("rho trace drifted");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) throw std::logic_error("rho has a negative eigenvalue");
}

// --------------------------------------------------------- Unitary/Projector

Unitary::Unitary(Matrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("unitary must be square");
    const Matrix defect = matrix_.adjoint() * matrix_ - Matrix::Identity(matrix_.rows(), matrix_.cols());
    if (defect.cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("matrix is not unitary");
}

Projector::Projector(Matrix matrix, std::string label) : matrix_(std::move(matrix)), label_(std::move(label)) {
    if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("projector must be square");
    if ((matrix_ * matrix_ - matrix_).cwiseAbs().maxCoeff() > 1e-12 ||
        (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("matrix is not an orthogonal projector");
}

// ----------------------------------------------------------------- plumbing

std::size_t total_dimension(std::span<const std::size_t> dims) {
    std::size_t d = 1;
    for (auto k : dims) d *= k;
    return d;
}

Matrix embed(const Matrix& op, std::span<const std::size_t> dims, std::span<const std::size_t> targets) {
    std::vector<std::size_t> target_dims;
    for (auto t : targets) {
        if (t >= dims.size()) throw std::out_of_range("target subsystem out of range");
        if (std::count(targets.begin(), targets.end(), t) != 1)
            throw std::invalid_argument("repeated target subsystem");
        target_dims.push_back(dims[t]);
    }
    const std::size_t d_op = total_dimension(target_dims);
    if (static_cast<std::size_t>(op.rows()) != d_op || static_cast<std::size_t>(op.cols()) != d_op)
        throw std::invalid_argument("operator dimension does not match target subsystems");

    const std::size_t d = total_dimension(dims);
    std::vector<bool> is_target(dims.size(), false);
    for (auto t : targets) is_target[t] = true;

    Matrix full = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    std::vector<std::size_t> di(dims.size()), dj(dims.size()), si(targets.size()), sj(targets.size());
    for (std::size_t i = 0; i < d; ++i) {
        to_digits(i, dims, di);
        for (std::size_t k = 0; k < targets.size(); ++k) si[k] = di[targets[k]];
        const std::size_t row_op = from_digits(si, target_dims);
        for (std::size_t j = 0; j < d; ++j) {
            to_digits(j, dims, dj);
            bool spectators_match = true;
            for (std::size_t k = 0; k < dims.size() && spectators_match; ++k)
                if (!is_target[k] && di[k] != dj[k]) spectators_match = false;
            if (!spectators_match) continue;
            for (std::size_t k = 0; k < targets.size(); ++k) sj[k] = dj[targets[k]];
            full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                op(static_cast<Eigen::Index>(row_op), static_cast<Eigen::Index>(from_digits(sj, target_dims)));
        }
    }
    return full;
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
    std::vector<Subsystem> subs = a.subsystems();
    subs.insert(subs.end(), b.subsystems().begin(), b.subsystems().end());
    if (a.is_pure() && b.is_pure()) {
        const Ket& ka = a.ket();
        const Ket& kb = b.ket();
        Ket k(ka.size() * kb.size());
        for (Eigen::Index i = 0; i < ka.size(); ++i) k.segment(i * kb.size(), kb.size()) = ka(i) * kb;
        return QuantumState::pure(std::move(subs), std::move(k));
    }
    const Matrix ra = a.density();
    const Matrix rb = b.density();
    const Eigen::Index nb = rb.rows();
    Matrix r(ra.rows() * nb, ra.cols() * nb);
    for (Eigen::Index i = 0; i < ra.rows(); ++i)
        for (Eigen::Index j = 0; j < ra.cols(); ++j) r.block(i * nb, j * nb, nb, nb) = ra(i, j) * rb;
    return QuantumState::mixed(std::move(subs), std::move(r));
}

QuantumState permute(const QuantumState& state, std::span<const std::size_t> order) {
    const auto dims = state.dims();
    if (order.size() != dims.size()) throw std::invalid_argument("permutation size mismatch");
    std::vector<std::size_t> new_dims;
    std::vector<Subsystem> subs;
    for (auto o : order) {
        if (o >= dims.size()) throw std::out_of_range("permutation index out of range");
        new_dims.push_back(dims[o]);
        subs.push_back(state.subsystems()[o]);
    }
    const std::size_t d = state.dimension();
    std::vector<std::size_t> map(d);
    std::vector<std::size_t> digits(dims.size()), moved(dims.size());
    for (std::size_t i = 0; i < d; ++i) {
        to_digits(i, dims, digits);
        for (std::size_t k = 0; k < order.size(); ++k) moved[k] = digits[order[k]];
        map[i] = from_digits(moved, new_dims);
    }
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) p(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(i)) = 1.0;
    if (state.is_pure()) return QuantumState::pure(std::move(subs), p * state.ket());
    return QuantumState::mixed(std::move(subs), p * state.density() * p.adjoint());
}

QuantumState apply_unitary(const QuantumState& state, const Unitary& u, std::span<const std::size_t> targets) {
    const auto dims = state.dims();
    const Matrix full = embed(u.matrix(), dims, targets);
    if (state.is_pure()) return QuantumState::pure(state.subsystems(), full * state.ket());
    return QuantumState::mixed(state.subsystems(), full * state.density() * full.adjoint());
}

QuantumState apply_channel(const QuantumState& state, std::span<const Matrix> kraus, std::size_t target) {
    const auto dims = state.dims();
    const Matrix rho = state.density();
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    if (kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
    Matrix completeness = Matrix::Zero(kraus.front().cols(), kraus.front().cols());
    for (const auto& k : kraus) {
        if (k.rows() != k.cols() || k.cols() != completeness.cols())
            throw std::invalid_argument("channel Kraus operators must be square and of one size");
        completeness += k.adjoint() * k;
    }
    if ((completeness - Matrix::Identity(completeness.rows(), completeness.cols())).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("Kraus operators do not sum to the identity");
    for (const auto& k : kraus) {
        const Matrix full = lift_single(k, dims, target);
        out += full * rho * full.adjoint();
    }
    return QuantumState::mixed(state.subsystems(), std::move(out));
}

Branch apply_operation(const QuantumState& state, const Matrix& op, std::size_t target, std::string label,
                       std::optional<Subsystem> relabel) {
    const auto dims = state.dims();
    const Matrix full = lift_single(op, dims, target);
    std::vector<Subsystem> subs = state.subsystems();
    subs[target] = relabel.value_or(Subsystem{subs[target].label, static_cast<std::size_t>(op.rows())});
    if (subs[target].dim != static_cast<std::size_t>(op.rows()))
        throw std::invalid_argument("relabelled subsystem dimension does not match operator");

    Branch b{std::move(label), 0.0, std::nullopt};
    if (state.is_pure()) {
        Ket k = full * state.ket();
        b.probability = k.squaredNorm();
        if (b.probability > 0.0) b.state = QuantumState::pure(std::move(subs), k / std::sqrt(b.probability));
    } else {
        Matrix r = full * state.density() * full.adjoint();
        b.probability = r.trace().real();
        if (b.probability > 0.0) b.state = QuantumState::mixed(std::move(subs), r / b.probability);
    }
    return b;
}

QuantumState partial_trace(const QuantumState& state, std::span<const std::size_t> keep) {
    const auto dims = state.dims();
    std::vector<bool> kept(dims.size(), false);
    std::vector<Subsystem> subs;
    std::vector<std::size_t> keep_dims;
    for (auto k : keep) {
        if (k >= dims.size()) throw std::out_of_range("kept subsystem out of range");
        if (kept[k]) throw std::invalid_argument("repeated kept subsystem");
        kept[k] = true;
        subs.push_back(state.subsystems()[k]);
        keep_dims.push_back(dims[k]);
    }
    if (subs.empty()) throw std::invalid_argument("partial trace must keep at least one subsystem");

    const Matrix rho = state.density();
    const std::size_t d = state.dimension();
    const std::size_t dk = total_dimension(keep_dims);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    std::vector<std::size_t> di(dims.size()), dj(dims.size()), ki(keep.size()), kj(keep.size());
    for (std::size_t i = 0; i < d; ++i) {
        to_digits(i, dims, di);
        for (std::size_t j = 0; j < d; ++j) {
            to_digits(j, dims, dj);
            bool traced_match = true;
            for (std::size_t k = 0; k < dims.size() && traced_match; ++k)
                if (!kept[k] && di[k] != dj[k]) traced_match = false;
            if (!traced_match) continue;
            for (std::size_t k = 0; k < keep.size(); ++k) {
                ki[k] = di[keep[k]];
                kj[k] = dj[keep[k]];
            }
            out(static_cast<Eigen::Index>(from_digits(ki, keep_dims)),
                static_cast<Eigen::Index>(from_digits(kj, keep_dims))) +=
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return QuantumState::mixed(std::move(subs), std::move(out));
}

Measurement measure_projective(const QuantumState& state, std::span<const Projector> projectors,
                               std::span<const std::size_t> targets) {
    const auto dims = state.dims();
    Measurement m;
    Matrix sum;
    for (const auto& p : projectors) {
        if (sum.size() == 0) sum = Matrix::Zero(p.matrix().rows(), p.matrix().cols());
        sum += p.matrix();
        const Matrix full = embed(p.matrix(), dims, targets);
        Branch b{p.label(), 0.0, std::nullopt};
        if (state.is_pure()) {
            Ket k = full * state.ket();
            b.probability = k.squaredNorm();
            if (b.probability > 0.0) b.state = QuantumState::pure(state.subsystems(), k / std::sqrt(b.probability));
        } else {
            Matrix r = full * state.density() * full;
            b.probability = r.trace().real();
            if (b.probability > 0.0) b.state = QuantumState::mixed(state.subsystems(), r / b.probability);
        }
        m.outcomes.push_back(std::move(b));
    }
    m.complete = sum.size() > 0 &&
                 (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() < 1e-10;
    return m;
}

double fidelity_to_pure(const QuantumState& rho, const Ket& target) {
    if (static_cast<std::size_t>(target.size()) != rho.dimension())
        throw std::invalid_argument("target dimension mismatch");
    if (rho.is_pure()) return std::norm(target.dot(rho.ket()));
    return (target.adjoint() * rho.density() * target)(0, 0).real();
}

// ------------------------------------------------------ node constructions

QuantumState emission_state() {
    Ket k = Ket::Zero(9);
    k(0 * 3 + 0) = 1.0 / std::sqrt(3.0);  // |0, pi>
    k(1 * 3 + 1) = 1.0 / std::sqrt(6.0);  // |1, sigma->
    k(2 * 3 + 2) = 1.0 / std::sqrt(2.0);  // |2, sigma+>
    return QuantumState::pure({{"ion", 3}, {"pol", 3}}, std::move(k));
}

FiberProjection fiber_projection(const QuantumState& state) {
    std::size_t pol = 0;
    try {
        pol = state.index_of("pol");
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("fiber_projection: state has no polarization subsystem");
    }
    if (state.subsystems()[pol].dim != 3)
        throw std::invalid_argument("fiber_projection: polarization subsystem must be (pi, sigma-, sigma+)");

    const double h = 1.0 / std::sqrt(2.0);
    Matrix keep = Matrix::Zero(2, 3);
    keep(0, 0) = 1.0;  // pi -> H
    keep(1, 1) = h;    // sigma- -> V
    keep(1, 2) = h;    // sigma+ -> V
    // Complement so that keep^dag keep + lost^dag lost = I.
    Matrix lost = Matrix::Zero(1, 3);
    lost(0, 1) = h;
    lost(0, 2) = -h;

    FiberProjection out;
    out.collected = apply_operation(state, keep, pol, "collected", Subsystem{"photon", 2});
    out.discarded = apply_operation(state, lost, pol, "discarded", Subsystem{"lost", 1});
    return out;
}

Unitary merge_unitary() {
    const double c = std::cos(std::numbers::pi / 3.0);
    const double s = std::sin(std::numbers::pi / 3.0);
    Matrix u = Matrix::Identity(3, 3);
    u(1, 1) = c;
    u(1, 2) = s;
    u(2, 1) = -s;
    u(2, 2) = c;
    return Unitary(std::move(u));
}

QuantumState merge_gate(const QuantumState& state, std::string_view ion_label) {
    const std::size_t ion = state.index_of(ion_label);
    if (state.subsystems()[ion].dim != 3) throw std::invalid_argument("merge_gate: ion must carry levels 0, 1, 2");
    const std::size_t targets[] = {ion};
    return apply_unitary(state, merge_unitary(), targets);
}

QuantumState map_to_qubit(const QuantumState& state, std::string_view label, std::size_t up_level,
                          std::size_t down_level) {
    const std::size_t idx = state.index_of(label);
    const std::size_t dim = state.subsystems()[idx].dim;
    if (up_level >= dim || down_level >= dim || up_level == down_level)
        throw std::invalid_argument("map_to_qubit: invalid levels");
    Matrix iso = Matrix::Zero(2, static_cast<Eigen::Index>(dim));
    iso(0, static_cast<Eigen::Index>(up_level)) = 1.0;
    iso(1, static_cast<Eigen::Index>(down_level)) = 1.0;
    Branch b = apply_operation(state, iso, idx, {}, Subsystem{std::string(label), 2});
    if (std::abs(1.0 - b.probability) > 1e-9 || !b.state)
        throw std::invalid_argument("map_to_qubit: population outside the mapped levels");
    return std::move(*b.state);
}

QuantumState bell_state() {
    Ket k = Ket::Zero(4);
    k(0) = 1.0 / std::sqrt(2.0);
    k(3) = 1.0 / std::sqrt(2.0);
    return QuantumState::pure({{"ion", 2}, {"photon", 2}}, std::move(k));
}

BellOverlap nearest_bell(const QuantumState& rho) {
    const auto dims = rho.dims();
    if (rho.dimension() != 4 || dims.size() != 2 || dims[0] != 2 || dims[1] != 2)
        throw std::invalid_argument("bell_fidelity: expected a two-qubit state");
    const Matrix r = rho.density();
    // Each family's overlap is diag/2 + Re(e^{i phase} coherence); the
    // maximizing phase cancels the coherence's argument.
    const double phi_value = 0.5 * (r(0, 0).real() + r(3, 3).real()) + std::abs(r(0, 3));
    const double psi_value = 0.5 * (r(1, 1).real() + r(2, 2).real()) + std::abs(r(1, 2));
    if (phi_value >= psi_value) return {phi_value, BellFamily::phi, -std::arg(r(0, 3))};
    return {psi_value, BellFamily::psi, -std::arg(r(1, 2))};
}

double bell_fidelity(const QuantumState& rho) { return nearest_bell(rho).fidelity; }

double visibility_fidelity(double vx, double vy, double vz) {
    for (double v : {vx, vy, vz})
        if (!(std::abs(v) <= 1.0)) throw std::invalid_argument("visibility outside [-1, 1]");
    return (1.0 + vx + vy + vz) / 4.0;
}

// --------------------------------------------------------------------- io

nlohmann::json to_json(const QuantumState& state) {
    nlohmann::json doc;
    doc["dims"] = state.dims();
    std::vector<std::string> labels;
    for (const auto& s : state.subsystems()) labels.push_back(s.label);
    doc["labels"] = labels;
    std::vector<double> re, im;
    if (state.is_pure()) {
        for (const auto& a : state.ket()) {
            re.push_back(a.real());
            im.push_back(a.imag());
        }
    } else {
        const Matrix r = state.density();
        for (Eigen::Index i = 0; i < r.rows(); ++i)
            for (Eigen::Index j = 0; j < r.cols(); ++j) {
                re.push_back(r(i, j).real());
                im.push_back(r(i, j).imag());
            }
    }
    doc["re"] = re;
    doc["im"] = im;
    return doc;
}

QuantumState state_from_json(const nlohmann::json& doc) {
    const auto dims = doc.at("dims").get<std::vector<std::size_t>>();
    const auto labels = doc.at("labels").get<std::vector<std::string>>();
    const auto re = doc.at("re").get<std::vector<double>>();
    const auto im = doc.at("im").get<std::vector<double>>();
    if (dims.size() != labels.size()) throw std::invalid_argument("dims/labels length mismatch");
    if (re.size() != im.size()) throw std::invalid_argument("re/im length mismatch");
    std::vector<Subsystem> subs;
    for (std::size_t k = 0; k < dims.size(); ++k) subs.push_back({labels[k], dims[k]});
    check_subsystems(subs);
    const std::size_t d = total_dimension(dims);
    if (re.size() == d) {
        Ket k(static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i) k(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
        return QuantumState::pure(std::move(subs), std::move(k));
    }
    if (re.size() == d * d) {
        Matrix r(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(re[i * d + j], im[i * d + j]);
        return QuantumState::mixed(std::move(subs), std::move(r));
    }
    throw std::invalid_argument("state JSON: amplitude count matches neither a ket nor a density matrix");
}

}  // namespace ionnode::quantum
