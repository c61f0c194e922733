#include "qsba/quantum.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsba {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

Amplitudes amps_of(std::initializer_list<Complex> values) {
    Amplitudes a(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const Complex& v : values) {
        a(i++) = v;
    }
    return a;
}

std::size_t bit_position(int num_qubits, int qubit) {
    return static_cast<std::size_t>(num_qubits - 1 - qubit);
}

void check_targets(int num_qubits, Targets targets) {
    if (targets.empty() || targets.size() > static_cast<std::size_t>(num_qubits)) {
        throw std::invalid_argument("target list does not fit the register");
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= num_qubits) {
            throw std::invalid_argument("target qubit out of range");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (targets[i] == targets[j]) {
                throw std::invalid_argument("target qubits must be distinct");
            }
        }
    }
}

// Maps a local index over the targets (targets[0] most significant) onto
// register bit positions.
struct TargetLayout {
    std::array<std::size_t, kMaxQubits> masks{};
    std::size_t k = 0;
    std::size_t all = 0;

    TargetLayout(int num_qubits, Targets targets) : k(targets.size()) {
        for (std::size_t j = 0; j < k; ++j) {
            masks[j] = std::size_t{1} << bit_position(num_qubits, targets[j]);
            all |= masks[j];
        }
    }

    std::size_t spread(std::size_t local) const {
        std::size_t out = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if ((local >> (k - 1 - j)) & 1U) {
                out |= masks[j];
            }
        }
        return out;
    }
};

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

} // namespace

// ---------------------------------------------------------------------------
// Labels

std::string_view to_string(StateLabel label) {
    switch (label) {
    case StateLabel::Z0: return "Z0";
    case StateLabel::Z1: return "Z1";
    case StateLabel::XPlus: return "Xplus";
    case StateLabel::XMinus: return "Xminus";
    case StateLabel::PsiPlus: return "PsiPlus";
    case StateLabel::PsiMinus: return "PsiMinus";
    case StateLabel::PhiPlus: return "PhiPlus";
    case StateLabel::PhiMinus: return "PhiMinus";
    }
    return "?";
}

StateLabel parse_state_label(std::string_view name) {
    for (int i = 0; i <= static_cast<int>(StateLabel::PhiMinus); ++i) {
        const auto label = static_cast<StateLabel>(i);
        if (to_string(label) == name) {
            return label;
        }
    }
    throw std::invalid_argument("unknown state label: " + std::string(name));
}

bool is_bb84(StateLabel label) {
    return label == StateLabel::Z0 || label == StateLabel::Z1 || label == StateLabel::XPlus ||
           label == StateLabel::XMinus;
}

bool is_diagonal(StateLabel label) { return label == StateLabel::XPlus || label == StateLabel::XMinus; }

StateLabel bb84_from_index(unsigned index) {
    switch (index) {
    case 0: return StateLabel::Z0;
    case 1: return StateLabel::Z1;
    case 2: return StateLabel::XPlus;
    case 3: return StateLabel::XMinus;
    default: throw std::invalid_argument("BB84 index must be in [0, 4)");
    }
}

int bb84_bit(StateLabel label) {
    if (!is_bb84(label)) {
        throw std::invalid_argument("not a BB84 label");
    }
    return (label == StateLabel::Z1 || label == StateLabel::XMinus) ? 1 : 0;
}

StateLabel bb84_random(Rng& rng) { return bb84_from_index(static_cast<unsigned>(rng.below(4))); }

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int num_qubits, Amplitudes amps) : num_qubits_(num_qubits), amps_(std::move(amps)) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("a state vector holds 1 to 4 qubits");
    }
    if (amps_.size() != (Eigen::Index{1} << num_qubits)) {
        throw std::invalid_argument("amplitude count must be 2^num_qubits");
    }
    double norm2 = 0.0;
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
        if (!finite(amps_(i))) {
            throw std::invalid_argument("amplitudes must be finite");
        }
        norm2 += std::norm(amps_(i));
    }
    if (std::abs(norm2 - 1.0) > kExactTol) {
        throw std::invalid_argument("state vector is not normalized");
    }
}

StateVector StateVector::basis_state(int num_qubits, std::size_t index) {
    if (num_qubits < 1 || num_qubits > kMaxQubits || index >= (std::size_t{1} << num_qubits)) {
        throw std::invalid_argument("basis index out of range");
    }
    Amplitudes a = Amplitudes::Zero(Eigen::Index{1} << num_qubits);
    a(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(num_qubits, std::move(a));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const int n = a.num_qubits() + b.num_qubits();
    if (n > kMaxQubits) {
        throw std::invalid_argument("tensor product exceeds 4 qubits");
    }
    Amplitudes out(static_cast<Eigen::Index>(a.dim() * b.dim()));
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out(static_cast<Eigen::Index>(i * b.dim() + j)) = a.amp(i) * b.amp(j);
        }
    }
    return StateVector(n, std::move(out));
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("inner product of states with different dimensions");
    }
    return a.amps().dot(b.amps()); // Eigen's dot conjugates the left operand
}

// ---------------------------------------------------------------------------
// UnitaryOp

UnitaryOp::UnitaryOp(OperatorMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || (entries_.rows() != 2 && entries_.rows() != 4)) {
        throw std::invalid_argument("unitary must be 2x2 or 4x4");
    }
    for (Eigen::Index i = 0; i < entries_.size(); ++i) {
        if (!finite(entries_(i))) {
            throw std::invalid_argument("unitary entries must be finite");
        }
    }
    const OperatorMatrix product = entries_.adjoint() * entries_;
    const OperatorMatrix id = OperatorMatrix::Identity(entries_.rows(), entries_.cols());
    if ((product - id).cwiseAbs().maxCoeff() > kExactTol) {
        throw std::invalid_argument("matrix is not unitary");
    }
}

UnitaryOp UnitaryOp::adjoint() const { return UnitaryOp(entries_.adjoint()); }

UnitaryOp UnitaryOp::identity() { return UnitaryOp(OperatorMatrix::Identity(2, 2)); }

UnitaryOp UnitaryOp::pauli_x() {
    OperatorMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return UnitaryOp(m);
}

UnitaryOp UnitaryOp::i_sigma_y() {
    OperatorMatrix m(2, 2);
    m << 0.0, 1.0, -1.0, 0.0;
    return UnitaryOp(m);
}

UnitaryOp UnitaryOp::hadamard() {
    OperatorMatrix m(2, 2);
    m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
    return UnitaryOp(m);
}

UnitaryOp UnitaryOp::cnot() {
    OperatorMatrix m = OperatorMatrix::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return UnitaryOp(m);
}

UnitaryOp rotation_u(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("rotation angle must be finite");
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    OperatorMatrix m(2, 2);
    m << c, s, -s, c;
    return UnitaryOp(m);
}

// ---------------------------------------------------------------------------
// ProjBasis

ProjBasis::ProjBasis(std::vector<Amplitudes> vectors, std::vector<std::string> labels)
    : vectors_(std::move(vectors)), labels_(std::move(labels)) {
    const std::size_t d = vectors_.size();
    if (d != 2 && d != 4 && d != 8 && d != 16) {
        throw std::invalid_argument("basis must have 2^k vectors");
    }
    if (labels_.empty()) {
        for (std::size_t k = 0; k < d; ++k) {
            labels_.push_back(std::to_string(k));
        }
    }
    if (labels_.size() != d) {
        throw std::invalid_argument("one label per basis vector");
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (static_cast<std::size_t>(vectors_[i].size()) != d) {
            throw std::invalid_argument("basis vectors must have length dim");
        }
        for (std::size_t j = 0; j <= i; ++j) {
            const Complex ip = vectors_[j].dot(vectors_[i]);
            const double expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(ip - expected) > kExactTol) {
                throw std::invalid_argument("basis vectors are not orthonormal");
            }
        }
    }
}

int ProjBasis::num_qubits() const noexcept {
    int n = 0;
    while ((std::size_t{1} << n) < vectors_.size()) {
        ++n;
    }
    return n;
}

const ProjBasis& z_basis() {
    static const ProjBasis basis({amps_of({1.0, 0.0}), amps_of({0.0, 1.0})}, {"Z0", "Z1"});
    return basis;
}

const ProjBasis& x_basis() {
    static const ProjBasis basis({amps_of({kInvSqrt2, kInvSqrt2}), amps_of({kInvSqrt2, -kInvSqrt2})},
                                 {"Xplus", "Xminus"});
    return basis;
}

const ProjBasis& tau_basis() {
    static const ProjBasis basis = [] {
        const double c = std::cos(std::numbers::pi / 8.0);
        const double s = std::sin(std::numbers::pi / 8.0);
        return ProjBasis({amps_of({c, -s}), amps_of({s, c})}, {"tau1", "tau2"});
    }();
    return basis;
}

const ProjBasis& bell_basis() {
    static const ProjBasis basis({amps_of({0.0, kInvSqrt2, kInvSqrt2, 0.0}), amps_of({0.0, kInvSqrt2, -kInvSqrt2, 0.0}),
                                  amps_of({kInvSqrt2, 0.0, 0.0, kInvSqrt2}), amps_of({kInvSqrt2, 0.0, 0.0, -kInvSqrt2})},
                                 {"PsiPlus", "PsiMinus", "PhiPlus", "PhiMinus"});
    return basis;
}

const ProjBasis& basis_of(StateLabel bb84) {
    if (!is_bb84(bb84)) {
        throw std::invalid_argument("basis_of expects a BB84 label");
    }
    return is_diagonal(bb84) ? x_basis() : z_basis();
}

// ---------------------------------------------------------------------------
// Povm

Povm::Povm(std::vector<OperatorMatrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) {
        throw std::invalid_argument("POVM needs at least one element");
    }
    const Eigen::Index d = elements_.front().rows();
    if (d != 2 && d != 4) {
        throw std::invalid_argument("POVM elements must be 2x2 or 4x4");
    }
    OperatorMatrix sum = OperatorMatrix::Zero(d, d);
    for (const OperatorMatrix& e : elements_) {
        if (e.rows() != d || e.cols() != d) {
            throw std::invalid_argument("POVM elements must share one dimension");
        }
        if ((e - e.adjoint()).cwiseAbs().maxCoeff() > kExactTol) {
            throw std::invalid_argument("POVM element is not Hermitian");
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(e), Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -kExactTol) {
            throw std::invalid_argument("POVM element is not positive semidefinite");
        }
        sum += e;
    }
    if ((sum - OperatorMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kExactTol) {
        throw std::invalid_argument("POVM elements do not sum to identity");
    }
}

double Povm::probability(const StateVector& state, std::size_t k) const {
    if (state.dim() != dim()) {
        throw std::invalid_argument("POVM dimension does not match the state");
    }
    const OperatorMatrix& e = element(k);
    const Complex value = state.amps().dot(e * state.amps());
    return std::max(0.0, value.real());
}

std::vector<double> Povm::probabilities(const StateVector& state) const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < size(); ++k) {
        out[k] = probability(state, k);
    }
    return out;
}

Povm usd_povm(double overlap_angle) {
    if (!(overlap_angle > 0.0 && overlap_angle < std::numbers::pi / 2.0)) {
        throw std::invalid_argument("overlap angle must lie in (0, pi/2)");
    }
    const double scale = 1.0 / (2.0 * std::pow(std::cos(overlap_angle / 2.0), 2));
    // psi2 = cos(a)|0> + sin(a)|1>, psi2_perp = sin(a)|0> - cos(a)|1>, psi1_perp = |1>.
    Eigen::Vector2cd psi2_perp(std::sin(overlap_angle), -std::cos(overlap_angle));
    Eigen::Vector2cd psi1_perp(0.0, 1.0);
    OperatorMatrix e1 = scale * (psi2_perp * psi2_perp.adjoint());
    OperatorMatrix e2 = scale * (psi1_perp * psi1_perp.adjoint());
    OperatorMatrix e3 = OperatorMatrix::Identity(2, 2) - e1 - e2;
    return Povm({e1, e2, e3});
}

// ---------------------------------------------------------------------------
// States and operations

StateVector prepare_named(StateLabel label) {
    switch (label) {
    case StateLabel::Z0: return StateVector(1, amps_of({1.0, 0.0}));
    case StateLabel::Z1: return StateVector(1, amps_of({0.0, 1.0}));
    case StateLabel::XPlus: return StateVector(1, amps_of({kInvSqrt2, kInvSqrt2}));
    case StateLabel::XMinus: return StateVector(1, amps_of({kInvSqrt2, -kInvSqrt2}));
    case StateLabel::PsiPlus: return StateVector(2, bell_basis().vector(0));
    case StateLabel::PsiMinus: return StateVector(2, bell_basis().vector(1));
    case StateLabel::PhiPlus: return StateVector(2, bell_basis().vector(2));
    case StateLabel::PhiMinus: return StateVector(2, bell_basis().vector(3));
    }
    throw std::invalid_argument("unknown state label");
}

StateVector prepare_named(std::string_view label) { return prepare_named(parse_state_label(label)); }

StateVector apply_unitary(const StateVector& state, const UnitaryOp& op, Targets targets) {
    check_targets(state.num_qubits(), targets);
    if (op.dim() != (std::size_t{1} << targets.size())) {
        throw std::invalid_argument("operator dimension does not match the number of targets");
    }
    const TargetLayout layout(state.num_qubits(), targets);
    const std::size_t local_dim = op.dim();
    Amplitudes out = state.amps();
    Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 4, 1> local(static_cast<Eigen::Index>(local_dim));
    for (std::size_t base = 0; base < state.dim(); ++base) {
        if ((base & layout.all) != 0) {
            continue;
        }
        for (std::size_t t = 0; t < local_dim; ++t) {
            local(static_cast<Eigen::Index>(t)) = state.amp(base | layout.spread(t));
        }
        const Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 4, 1> mapped = op.entries() * local;
        for (std::size_t t = 0; t < local_dim; ++t) {
            out(static_cast<Eigen::Index>(base | layout.spread(t))) = mapped(static_cast<Eigen::Index>(t));
        }
    }
    return StateVector(state.num_qubits(), std::move(out));
}

StateVector apply_unitary(const StateVector& state, const UnitaryOp& op, int target) {
    const std::array<int, 1> t{target};
    return apply_unitary(state, op, Targets(t));
}

StateVector apply_unitary(const StateVector& state, const UnitaryOp& op, int first, int second) {
    const std::array<int, 2> t{first, second};
    return apply_unitary(state, op, Targets(t));
}

namespace {

// Amplitude of the projection onto basis vector `k` for every base index
// (target bits cleared).
Complex overlap_at(const StateVector& state, const Amplitudes& v, const TargetLayout& layout, std::size_t base) {
    Complex c = 0.0;
    for (std::size_t t = 0; t < static_cast<std::size_t>(v.size()); ++t) {
        c += std::conj(v(static_cast<Eigen::Index>(t))) * state.amp(base | layout.spread(t));
    }
    return c;
}

} // namespace

std::vector<double> outcome_probabilities(const StateVector& state, const ProjBasis& basis, Targets targets) {
    check_targets(state.num_qubits(), targets);
    if (basis.dim() != (std::size_t{1} << targets.size())) {
        throw std::invalid_argument("basis dimension does not match the number of targets");
    }
    const TargetLayout layout(state.num_qubits(), targets);
    std::vector<double> probs(basis.dim(), 0.0);
    for (std::size_t k = 0; k < basis.dim(); ++k) {
        for (std::size_t base = 0; base < state.dim(); ++base) {
            if ((base & layout.all) == 0) {
                probs[k] += std::norm(overlap_at(state, basis.vector(k), layout, base));
            }
        }
    }
    return probs;
}

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) {
            continue;
        }
        last_positive = k;
        cumulative += probs[k];
        if (u < cumulative) {
            return k;
        }
    }
    return last_positive;
}

MeasRecord measure_projective(const StateVector& state, const ProjBasis& basis, Targets targets, Rng& rng) {
    const std::vector<double> probs = outcome_probabilities(state, basis, targets);
    const std::size_t k = sample_index(probs, rng);
    const TargetLayout layout(state.num_qubits(), targets);
    const Amplitudes& v = basis.vector(k);
    const double norm = std::sqrt(probs[k]);
    Amplitudes post = Amplitudes::Zero(static_cast<Eigen::Index>(state.dim()));
    for (std::size_t base = 0; base < state.dim(); ++base) {
        if ((base & layout.all) != 0) {
            continue;
        }
        const Complex c = overlap_at(state, v, layout, base) / norm;
        for (std::size_t t = 0; t < basis.dim(); ++t) {
            post(static_cast<Eigen::Index>(base | layout.spread(t))) = v(static_cast<Eigen::Index>(t)) * c;
        }
    }
    // Remove rounding drift before the invariant check.
    post /= post.norm();
    return MeasRecord{k, StateVector(state.num_qubits(), std::move(post)), probs[k]};
}

MeasRecord measure_projective(const StateVector& state, const ProjBasis& basis, int target, Rng& rng) {
    const std::array<int, 1> t{target};
    return measure_projective(state, basis, Targets(t), rng);
}

MeasRecord measure_povm(const StateVector& state, const Povm& povm, Rng& rng) {
    const std::vector<double> probs = povm.probabilities(state);
    const std::size_t k = sample_index(probs, rng);
    return MeasRecord{k, std::nullopt, probs[k]};
}

MeasRecord bell_measure(const StateVector& state, int first, int second, Rng& rng) {
    const std::array<int, 2> t{first, second};
    return measure_projective(state, bell_basis(), Targets(t), rng);
}

ProductCheck is_product(const StateVector& state, Targets side, double tol) {
    if (state.num_qubits() < 2) {
        throw std::invalid_argument("product test needs at least two qubits");
    }
    check_targets(state.num_qubits(), side);
    if (side.size() == static_cast<std::size_t>(state.num_qubits())) {
        throw std::invalid_argument("cut must leave qubits on both sides");
    }
    const TargetLayout layout(state.num_qubits(), side);
    const std::size_t dim_a = std::size_t{1} << side.size();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_a));
    for (std::size_t base = 0; base < state.dim(); ++base) {
        if ((base & layout.all) != 0) {
            continue;
        }
        for (std::size_t a = 0; a < dim_a; ++a) {
            for (std::size_t b = 0; b < dim_a; ++b) {
                rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    state.amp(base | layout.spread(a)) * std::conj(state.amp(base | layout.spread(b)));
            }
        }
    }
    const double purity = rho.cwiseAbs2().sum();
    return ProductCheck{purity >= 1.0 - tol, purity};
}

bool states_equal_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
    return std::abs(inner(a, b)) >= 1.0 - tol;
}

} // namespace qsba
