#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsba/rng.hpp"

namespace qsba {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 4;
/// Tolerance for algebraic identities (norms, orthogonality, completeness).
inline constexpr double kExactTol = 1e-12;

/// Amplitude vector over at most 4 qubits; storage lives inline.
using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 16, 1>;
/// Operator on at most 2 qubits; storage lives inline.
using OperatorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

enum class StateLabel { Z0, Z1, XPlus, XMinus, PsiPlus, PsiMinus, PhiPlus, PhiMinus };

std::string_view to_string(StateLabel label);
/// Accepts the canonical names ("Z0", "Xplus", "PsiMinus", ...). Throws std::invalid_argument.
StateLabel parse_state_label(std::string_view name);

bool is_bb84(StateLabel label);
/// True for |+> and |->.
bool is_diagonal(StateLabel label);
/// 0 -> |0>, 1 -> |1>, 2 -> |+>, 3 -> |->.
StateLabel bb84_from_index(unsigned index);
/// Position of a BB84 state inside its own basis (0 for |0>,|+>; 1 for |1>,|->).
int bb84_bit(StateLabel label);
StateLabel bb84_random(Rng& rng);

/// Exact pure state of 1..4 qubits. Qubit 0 is the most significant bit of
/// the amplitude index, so |01> has index 1.
class StateVector {
public:
    /// Throws std::invalid_argument unless the size is 2^n, every amplitude is
    /// finite and the squared norm is 1 within kExactTol.
    StateVector(int num_qubits, Amplitudes amps);

    static StateVector basis_state(int num_qubits, std::size_t index);

    int num_qubits() const noexcept { return num_qubits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
    const Amplitudes& amps() const noexcept { return amps_; }
    Complex amp(std::size_t index) const { return amps_(static_cast<Eigen::Index>(index)); }

private:
    int num_qubits_;
    Amplitudes amps_;
};

StateVector tensor(const StateVector& a, const StateVector& b);
Complex inner(const StateVector& a, const StateVector& b);

/// Unitary on one or two qubits.
class UnitaryOp {
public:
    /// Throws std::invalid_argument unless dim is 2 or 4 and U^dagger U = I within kExactTol.
    explicit UnitaryOp(OperatorMatrix entries);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    int num_qubits() const noexcept { return dim() == 2 ? 1 : 2; }
    const OperatorMatrix& entries() const noexcept { return entries_; }
    UnitaryOp adjoint() const;

    static UnitaryOp identity();
    static UnitaryOp pauli_x();
    /// i*sigma_y = [[0, 1], [-1, 0]].
    static UnitaryOp i_sigma_y();
    static UnitaryOp hadamard();
    /// Control is the first target, the second target is flipped.
    static UnitaryOp cnot();

private:
    OperatorMatrix entries_;
};

/// [[cos t, sin t], [-sin t, cos t]].
UnitaryOp rotation_u(double theta);

/// Orthonormal measurement basis on k qubits (2^k vectors).
class ProjBasis {
public:
    ProjBasis(std::vector<Amplitudes> vectors, std::vector<std::string> labels);

    std::size_t dim() const noexcept { return vectors_.size(); }
    int num_qubits() const noexcept;
    const Amplitudes& vector(std::size_t k) const { return vectors_.at(k); }
    const std::string& label(std::size_t k) const { return labels_.at(k); }

private:
    std::vector<Amplitudes> vectors_;
    std::vector<std::string> labels_;
};

const ProjBasis& z_basis();
const ProjBasis& x_basis();
/// tau1 = cos(pi/8)|0> - sin(pi/8)|1>, tau2 = sin(pi/8)|0> + cos(pi/8)|1>.
const ProjBasis& tau_basis();
/// Outcomes ordered psi+, psi-, phi+, phi-, so the outcome index equals the two-bit code.
const ProjBasis& bell_basis();
/// Z basis for |0>,|1>; X basis for |+>,|->.
const ProjBasis& basis_of(StateLabel bb84);

/// Generalized measurement; elements are dim x dim PSD matrices summing to I.
class Povm {
public:
    /// Throws std::invalid_argument when an element is not Hermitian PSD
    /// (eigenvalues >= -kExactTol) or the elements do not sum to I.
    explicit Povm(std::vector<OperatorMatrix> elements);

    std::size_t size() const noexcept { return elements_.size(); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(elements_.front().rows()); }
    const OperatorMatrix& element(std::size_t k) const { return elements_.at(k); }
    /// Born probability <s|E_k|s>.
    double probability(const StateVector& state, std::size_t k) const;
    std::vector<double> probabilities(const StateVector& state) const;

private:
    std::vector<OperatorMatrix> elements_;
};

/// Optimal unambiguous discrimination of |0> and cos(a)|0> + sin(a)|1>.
///
/// E1 = |psi2_perp><psi2_perp| / (2 cos^2(a/2)) identifies |0>,
/// E2 = |1><1| / (2 cos^2(a/2)) identifies the second state,
/// E3 = I - E1 - E2 is inconclusive with probability cos(a) on either input.
/// Requires 0 < a < pi/2.
Povm usd_povm(double overlap_angle);

struct MeasRecord {
    std::size_t outcome_index = 0;
    std::optional<StateVector> post_state;
    double probability = 0.0;
};

StateVector prepare_named(StateLabel label);
StateVector prepare_named(std::string_view label);

using Targets = std::span<const int>;

StateVector apply_unitary(const StateVector& state, const UnitaryOp& op, Targets targets);
StateVector apply_unitary(const StateVector& state, const UnitaryOp& op, int target);
StateVector apply_unitary(const StateVector& state, const UnitaryOp& op, int first, int second);

/// Exact outcome distribution of a projective measurement on the targets.
std::vector<double> outcome_probabilities(const StateVector& state, const ProjBasis& basis, Targets targets);

/// Samples one outcome with a single uniform draw over the cumulative Born
/// probabilities and returns the normalized post-measurement state.
MeasRecord measure_projective(const StateVector& state, const ProjBasis& basis, Targets targets, Rng& rng);
MeasRecord measure_projective(const StateVector& state, const ProjBasis& basis, int target, Rng& rng);

MeasRecord measure_povm(const StateVector& state, const Povm& povm, Rng& rng);

MeasRecord bell_measure(const StateVector& state, int first, int second, Rng& rng);

struct ProductCheck {
    bool product = false;
    double purity = 0.0;
};

/// Purity Tr(rho_A^2) of the reduced state on `side`; product iff purity >= 1 - tol.
ProductCheck is_product(const StateVector& state, Targets side, double tol = kExactTol);

/// |<a|b>| >= 1 - tol.
bool states_equal_up_to_phase(const StateVector& a, const StateVector& b, double tol = kExactTol);

/// Index drawn from `probs` with one uniform draw; the last outcome with
/// positive weight absorbs rounding.
std::size_t sample_index(std::span<const double> probs, Rng& rng);

} // namespace qsba
