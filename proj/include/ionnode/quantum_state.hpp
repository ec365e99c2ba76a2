// quantum_state.hpp - dense states and operators on small composite spaces
//
// Subsystem order is fixed at construction (ions first, then photonic modes)
// and every basis index is row-major over that order: the first subsystem is
// the most significant digit.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ionnode::quantum {

using Complex = std::complex<double>;
using Ket = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxDimension = 64;

struct Subsystem {
    std::string label;
    std::size_t dim = 0;

    friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

class QuantumState {
public:
    /// Pure state. Amplitudes must have unit norm (1e-10), they are then
    /// renormalized exactly.
    static QuantumState pure(std::vector<Subsystem> subsystems, Ket amplitudes);

    /// Density matrix. Must be Hermitian with unit trace (1e-10).
    static QuantumState mixed(std::vector<Subsystem> subsystems, Matrix rho);

    bool is_pure() const { return ket_.has_value(); }
    const Ket& ket() const;
    Matrix density() const;
    QuantumState as_mixed() const;

    const std::vector<Subsystem>& subsystems() const { return subsystems_; }
    std::vector<std::size_t> dims() const;
    std::size_t dimension() const { return dimension_; }
    std::size_t index_of(std::string_view label) const;

    /// Population of one computational basis state, one level per subsystem.
    double population(std::span<const std::size_t> levels) const;

    /// Full invariant check including positivity (eigenvalues >= -1e-10).
    void validate() const;

private:
    QuantumState() = default;

    std::vector<Subsystem> subsystems_;
    std::size_t dimension_ = 0;
    std::optional<Ket> ket_;
    Matrix rho_;
};

class Unitary {
public:
    explicit Unitary(Matrix matrix);
    const Matrix& matrix() const { return matrix_; }
    Unitary inverse() const { return Unitary(matrix_.adjoint()); }

private:
    Matrix matrix_;
};

class Projector {
public:
    Projector(Matrix matrix, std::string label);
    const Matrix& matrix() const { return matrix_; }
    const std::string& label() const { return label_; }

private:
    Matrix matrix_;
    std::string label_;
};

/// One post-selected branch. `state` is empty when the branch has zero weight.
struct Branch {
    std::string label;
    double probability = 0.0;
    std::optional<QuantumState> state;
};

struct Measurement {
    std::vector<Branch> outcomes;
    /// False when the projectors did not sum to the identity (post-selection).
    bool complete = true;
};

// ---------------------------------------------------------------- plumbing

std::size_t total_dimension(std::span<const std::size_t> dims);

/// Lifts `op` acting on `targets` (in that order) to the full space.
Matrix embed(const Matrix& op, std::span<const std::size_t> dims, std::span<const std::size_t> targets);

QuantumState tensor(const QuantumState& a, const QuantumState& b);

/// Reorders subsystems; order[i] is the old index of new subsystem i.
QuantumState permute(const QuantumState& state, std::span<const std::size_t> order);

QuantumState apply_unitary(const QuantumState& state, const Unitary& u, std::span<const std::size_t> targets);

/// Applies sum_k K rho K^dagger on one subsystem (square Kraus operators).
QuantumState apply_channel(const QuantumState& state, std::span<const Matrix> kraus, std::size_t target);

/// K rho K^dagger on one subsystem, K possibly rectangular (then `relabel`
/// describes the new subsystem). Returns the trace as the branch probability
/// and the renormalized state.
Branch apply_operation(const QuantumState& state, const Matrix& op, std::size_t target,
                       std::string label = {}, std::optional<Subsystem> relabel = std::nullopt);

QuantumState partial_trace(const QuantumState& state, std::span<const std::size_t> keep);

Measurement measure_projective(const QuantumState& state, std::span<const Projector> projectors,
                               std::span<const std::size_t> targets);

double fidelity_to_pure(const QuantumState& rho, const Ket& target);

// ------------------------------------------------------ node constructions

/// Ion level (0, 1, 2) entangled with emitted polarization (pi, sigma-, sigma+).
QuantumState emission_state();

/// Collection into a single-mode fiber perpendicular to the field axis:
/// pi -> H with amplitude 1, sigma+- -> V with amplitude 1/sqrt(2).
struct FiberProjection {
    Branch collected;
    Branch discarded;
};
FiberProjection fiber_projection(const QuantumState& state);

/// Rotation by 2*pi/3 on span{|1>,|2>} of the 3-level ion that takes
/// (|1> + sqrt(3)|2>)/2 to |1>.
Unitary merge_unitary();
QuantumState merge_gate(const QuantumState& state, std::string_view ion_label = "ion");

/// Maps ion levels (up_level, down_level) onto a qubit (|up>=0, |down>=1).
/// Population outside those levels must vanish.
QuantumState map_to_qubit(const QuantumState& state, std::string_view label, std::size_t up_level,
                          std::size_t down_level);

/// (|up,H> + |down,V>)/sqrt(2) on subsystems ("ion", "photon").
QuantumState bell_state();

enum class BellFamily { phi, psi };

struct BellOverlap {
    double fidelity = 0.0;
    BellFamily family = BellFamily::phi;
    double phase = 0.0;
};

/// Best overlap with (|00> + e^{i phase}|11>)/sqrt(2) or (|01> + e^{i phase}|10>)/sqrt(2).
BellOverlap nearest_bell(const QuantumState& rho);
double bell_fidelity(const QuantumState& rho);

double visibility_fidelity(double vx, double vy, double vz);

// --------------------------------------------------------------------- io

nlohmann::json to_json(const QuantumState& state);
QuantumState state_from_json(const nlohmann::json& doc);

}  // namespace ionnode::quantum
