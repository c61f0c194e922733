#pragma once

#include <cstddef>
#include <vector>

#include "qsba/permutation.hpp"
#include "qsba/quantum.hpp"

namespace qsba {

/// Handle to one qubit inside a register of a QubitSequence.
struct QubitRef {
    std::size_t reg = 0;
    int slot = 0;
};

/// Ordered sequence of travelling qubits.
///
/// Qubits that are entangled (a Bell pair, a travel qubit and an adversary's
/// ancilla) share one register; the sequence order is a list of references
/// into those registers, so reordering never touches amplitudes.
class QubitSequence {
public:
    QubitSequence() = default;

    std::size_t size() const noexcept { return order_.size(); }
    bool empty() const noexcept { return order_.empty(); }

    /// Appends every qubit of `state` (a fresh register) in slot order.
    void append(StateVector state);
    /// Inserts a fresh single-qubit register at `position`.
    void insert(std::size_t position, StateVector single);
    /// Drops the reference at `position`; the register stays allocated.
    void erase(std::size_t position);

    QubitRef ref(std::size_t position) const { return order_.at(position); }
    const StateVector& register_state(std::size_t reg) const { return registers_.at(reg); }
    const StateVector& register_of(std::size_t position) const { return registers_.at(ref(position).reg); }

    /// Single-qubit unitary on the qubit at `position`.
    void apply(std::size_t position, const UnitaryOp& op);
    /// Two-qubit unitary on two qubits in the same register.
    void apply(QubitRef first, QubitRef second, const UnitaryOp& op);

    /// Extends the register holding `position` with a |0> ancilla and returns it.
    QubitRef attach_ancilla(std::size_t position);

    /// Projective measurement of one qubit; collapses its register.
    std::size_t measure(std::size_t position, const ProjBasis& basis, Rng& rng);
    std::size_t measure(QubitRef ref, const ProjBasis& basis, Rng& rng);
    /// Bell measurement of two positions; merges registers when needed.
    std::size_t bell_measure(std::size_t first, std::size_t second, Rng& rng);

    /// Exact outcome probabilities for a single-qubit measurement at `position`.
    std::vector<double> probabilities(std::size_t position, const ProjBasis& basis) const;

    /// Replaces the qubit at `position` with `fresh` (a single-qubit state).
    ///
    /// A qubit entangled with others is first measured in Z, which samples the
    /// partner's reduced state exactly, and then rotated onto `fresh`.
    void replace(std::size_t position, const StateVector& fresh, Rng& rng);

    /// out[p(i)] = in[i].
    void permute(const PermutationOp& p);

private:
    std::size_t merge(std::size_t reg_a, std::size_t reg_b);

    std::vector<StateVector> registers_;
    std::vector<QubitRef> order_;
};

} // namespace qsba
