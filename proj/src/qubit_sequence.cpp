#include "qsba/qubit_sequence.hpp"

#include <array>
#include <stdexcept>

namespace qsba {

void QubitSequence::append(StateVector state) {
    const std::size_t reg = registers_.size();
    const int n = state.num_qubits();
    registers_.push_back(std::move(state));
    for (int slot = 0; slot < n; ++slot) {
        order_.push_back(QubitRef{reg, slot});
    }
}

void QubitSequence::insert(std::size_t position, StateVector single) {
    if (single.num_qubits() != 1) {
        throw std::invalid_argument("insert expects a single-qubit state");
    }
    if (position > order_.size()) {
        throw std::out_of_range("insert position past the end of the sequence");
    }
    registers_.push_back(std::move(single));
    order_.insert(order_.begin() + static_cast<std::ptrdiff_t>(position), QubitRef{registers_.size() - 1, 0});
}

void QubitSequence::erase(std::size_t position) {
    if (position >= order_.size()) {
        throw std::out_of_range("erase position out of range");
    }
    order_.erase(order_.begin() + static_cast<std::ptrdiff_t>(position));
}

void QubitSequence::apply(std::size_t position, const UnitaryOp& op) {
    const QubitRef r = ref(position);
    registers_[r.reg] = apply_unitary(registers_[r.reg], op, r.slot);
}

void QubitSequence::apply(QubitRef first, QubitRef second, const UnitaryOp& op) {
    if (first.reg != second.reg) {
        throw std::invalid_argument("two-qubit operation across registers");
    }
    registers_[first.reg] = apply_unitary(registers_[first.reg], op, first.slot, second.slot);
}

QubitRef QubitSequence::attach_ancilla(std::size_t position) {
    const QubitRef r = ref(position);
    const int slot = registers_[r.reg].num_qubits();
    registers_[r.reg] = tensor(registers_[r.reg], prepare_named(StateLabel::Z0));
    return QubitRef{r.reg, slot};
}

std::size_t QubitSequence::measure(std::size_t position, const ProjBasis& basis, Rng& rng) {
    return measure(ref(position), basis, rng);
}

std::size_t QubitSequence::measure(QubitRef r, const ProjBasis& basis, Rng& rng) {
    MeasRecord rec = measure_projective(registers_.at(r.reg), basis, r.slot, rng);
    registers_[r.reg] = std::move(*rec.post_state);
    return rec.outcome_index;
}

std::size_t QubitSequence::merge(std::size_t reg_a, std::size_t reg_b) {
    if (reg_a == reg_b) {
        return reg_a;
    }
    const int shift = registers_[reg_a].num_qubits();
    registers_[reg_a] = tensor(registers_[reg_a], registers_[reg_b]);
    for (QubitRef& q : order_) {
        if (q.reg == reg_b) {
            q = QubitRef{reg_a, q.slot + shift};
        }
    }
    return reg_a;
}

std::size_t QubitSequence::bell_measure(std::size_t first, std::size_t second, Rng& rng) {
    if (first == second) {
        throw std::invalid_argument("Bell measurement needs two distinct positions");
    }
    merge(ref(first).reg, ref(second).reg);
    const QubitRef a = ref(first);
    const QubitRef b = ref(second);
    MeasRecord rec = qsba::bell_measure(registers_[a.reg], a.slot, b.slot, rng);
    registers_[a.reg] = std::move(*rec.post_state);
    return rec.outcome_index;
}

std::vector<double> QubitSequence::probabilities(std::size_t position, const ProjBasis& basis) const {
    const QubitRef r = ref(position);
    const std::array<int, 1> t{r.slot};
    return outcome_probabilities(registers_[r.reg], basis, Targets(t));
}

void QubitSequence::replace(std::size_t position, const StateVector& fresh, Rng& rng) {
    if (fresh.num_qubits() != 1) {
        throw std::invalid_argument("replacement must be a single qubit");
    }
    const QubitRef r = ref(position);
    if (registers_[r.reg].num_qubits() == 1) {
        registers_[r.reg] = fresh;
        return;
    }
    const std::size_t t = measure(r, z_basis(), rng);
    const Complex a = fresh.amp(0);
    const Complex b = fresh.amp(1);
    // Columns: the image of |t> is `fresh`, the other column completes a unitary.
    OperatorMatrix v(2, 2);
    if (t == 0) {
        v << a, -std::conj(b), b, std::conj(a);
    } else {
        v << -std::conj(b), a, std::conj(a), b;
    }
    registers_[r.reg] = apply_unitary(registers_[r.reg], UnitaryOp(v), r.slot);
}

void QubitSequence::permute(const PermutationOp& p) { order_ = p.apply(order_); }

} // namespace qsba
