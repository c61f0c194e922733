#include <doctest.h>

#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "oracles.hpp"
#include "qsba/permutation.hpp"
#include "qsba/quantum.hpp"
#include "qsba/qubit_sequence.hpp"
#include "qsba/rng.hpp"

using namespace qsba;

namespace {

double prob(const StateVector& s, const ProjBasis& b, std::size_t k) {
    const int target = 0;
    return outcome_probabilities(s, b, std::span<const int>(&target, 1))[k];
}

} // namespace

TEST_CASE("rng streams are reproducible and distinct per trial") {
    Rng a = Rng::for_trial(42, 0);
    Rng b = Rng::for_trial(42, 0);
    Rng c = Rng::for_trial(42, 1);
    const auto first = a();
    CHECK(first == b());
    CHECK(first != c());

    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        seeds.insert(derive_stream_seed(7, i));
    }
    CHECK(seeds.size() == 10000);
}

TEST_CASE("rng engine is the standard 64-bit Mersenne Twister") {
    // The standard fixes the 10000th output of a default-seeded mt19937_64.
    Rng rng(5489u);
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) {
        x = rng();
    }
    CHECK(x == 9981545732273789042ull);
}

TEST_CASE("rng bounded draws stay in range and cover it") {
    Rng rng(3);
    std::array<int, 7> hits{};
    for (int i = 0; i < 7000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        ++hits[v];
    }
    for (int h : hits) {
        CHECK(h > 800);
    }
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("state vectors reject bad input") {
    Amplitudes a(2);
    a << Complex(1.0, 0.0), Complex(1.0, 0.0);
    CHECK_THROWS_AS(StateVector(1, a), std::invalid_argument);
    Amplitudes b(3);
    b << Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0);
    CHECK_THROWS_AS(StateVector(2, b), std::invalid_argument);
    Amplitudes c(2);
    c << Complex(std::nan(""), 0.0), Complex(0.0, 0.0);
    CHECK_THROWS_AS(StateVector(1, c), std::invalid_argument);
}

TEST_CASE("qubit 0 is the most significant index bit") {
    const StateVector s = tensor(prepare_named(StateLabel::Z0), prepare_named(StateLabel::Z1));
    CHECK(std::abs(s.amp(1) - Complex(1.0, 0.0)) < 1e-15);
    const StateVector flipped = apply_unitary(StateVector::basis_state(2, 0), UnitaryOp::pauli_x(), 0);
    CHECK(std::abs(flipped.amp(2)) == doctest::Approx(1.0));
}

TEST_CASE("unitaries are checked and compose as expected") {
    OperatorMatrix bad(2, 2);
    bad << 1.0, 1.0, 0.0, 1.0;
    CHECK_THROWS_AS(UnitaryOp{bad}, std::invalid_argument);

    // i*sigma_y swaps |+> and |-> and maps |0> to -|1>.
    const StateVector plus = prepare_named(StateLabel::XPlus);
    CHECK(states_equal_up_to_phase(apply_unitary(plus, UnitaryOp::i_sigma_y(), 0), prepare_named(StateLabel::XMinus)));
    const StateVector one = apply_unitary(prepare_named(StateLabel::Z0), UnitaryOp::i_sigma_y(), 0);
    CHECK(std::abs(one.amp(1) - Complex(-1.0, 0.0)) < 1e-15);

    // CNOT on |+>|0> yields phi+.
    const StateVector pair = apply_unitary(tensor(plus, prepare_named(StateLabel::Z0)), UnitaryOp::cnot(), 0, 1);
    CHECK(states_equal_up_to_phase(pair, prepare_named(StateLabel::PhiPlus)));
}

TEST_CASE("bell basis outcome order is psi+, psi-, phi+, phi-") {
    const std::array<StateLabel, 4> order{StateLabel::PsiPlus, StateLabel::PsiMinus, StateLabel::PhiPlus,
                                          StateLabel::PhiMinus};
    const std::array<int, 2> both{0, 1};
    for (std::size_t k = 0; k < 4; ++k) {
        const auto p = outcome_probabilities(prepare_named(order[k]), bell_basis(), both);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(p[j] == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("tau basis guesses |0> and |+> with the minimum-error probability") {
    const double ps = oracle::tau_success();
    CHECK(prob(prepare_named(StateLabel::Z0), tau_basis(), 0) == doctest::Approx(ps).epsilon(1e-14));
    CHECK(prob(prepare_named(StateLabel::XPlus), tau_basis(), 1) == doctest::Approx(ps).epsilon(1e-14));
    CHECK(ps == doctest::Approx(0.8535533905932737).epsilon(1e-15));
}

TEST_CASE("usd povm never errs and is inconclusive with probability 1/sqrt(2)") {
    const Povm povm = usd_povm(oracle::pi / 4.0);
    REQUIRE(povm.size() == 3);
    const StateVector zero = prepare_named(StateLabel::Z0);
    const StateVector plus = prepare_named(StateLabel::XPlus);
    CHECK(std::abs(povm.probability(zero, 1)) < 1e-15);
    CHECK(std::abs(povm.probability(plus, 0)) < 1e-15);
    CHECK(povm.probability(zero, 2) == doctest::Approx(oracle::usd_inconclusive()).epsilon(1e-14));
    CHECK(povm.probability(plus, 2) == doctest::Approx(oracle::usd_inconclusive()).epsilon(1e-14));
    CHECK_THROWS_AS(usd_povm(0.0), std::invalid_argument);
    CHECK_THROWS_AS(usd_povm(oracle::pi / 2.0), std::invalid_argument);
}

TEST_CASE("povm construction rejects incomplete or non-positive elements") {
    OperatorMatrix half = OperatorMatrix::Identity(2, 2) * 0.5;
    CHECK_THROWS_AS(Povm({half}), std::invalid_argument);
    OperatorMatrix neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    OperatorMatrix rest = OperatorMatrix::Identity(2, 2) - neg;
    CHECK_THROWS_AS(Povm({neg, rest}), std::invalid_argument);
}

TEST_CASE("z measurement of |+> follows the Born rule") {
    Rng rng(11);
    const std::uint64_t n = 40000;
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        ones += measure_projective(prepare_named(StateLabel::XPlus), z_basis(), 0, rng).outcome_index;
    }
    CHECK(oracle::wilson_contains(ones, n, 4.0, 0.5));
}

TEST_CASE("measurement collapses the partner of a bell pair") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const MeasRecord r = measure_projective(prepare_named(StateLabel::PhiPlus), z_basis(), 0, rng);
        REQUIRE(r.post_state);
        const std::array<int, 1> second{1};
        const auto p = outcome_probabilities(*r.post_state, z_basis(), second);
        CHECK(p[r.outcome_index] == doctest::Approx(1.0));
    }
}

TEST_CASE("purity separates product and entangled states") {
    const std::array<int, 1> first{0};
    CHECK(is_product(prepare_named(StateLabel::PhiPlus), first).purity == doctest::Approx(0.5));
    CHECK_FALSE(is_product(prepare_named(StateLabel::PhiPlus), first).product);
    const StateVector prod = tensor(prepare_named(StateLabel::XPlus), prepare_named(StateLabel::Z1));
    CHECK(is_product(prod, first).product);
}

TEST_CASE("permutation algebra") {
    Rng rng(9);
    const PermutationOp a = PermutationOp::random(12, rng);
    const PermutationOp b = PermutationOp::random(12, rng);
    CHECK(a.then(a.inverse()) == PermutationOp::identity(12));
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(a.then(b)(i) == b(a(i)));
    }
    const std::vector<int> in{10, 11, 12};
    const PermutationOp p({2, 0, 1});
    CHECK(p.apply(in) == std::vector<int>{11, 12, 10});
    CHECK_THROWS_AS(PermutationOp({0, 0, 1}), std::invalid_argument);
}

TEST_CASE("qubit sequences reorder references and keep entanglement") {
    Rng rng(21);
    QubitSequence seq;
    seq.append(prepare_named(StateLabel::Z1));
    seq.append(prepare_named(StateLabel::PhiMinus));
    seq.append(prepare_named(StateLabel::Z0));
    REQUIRE(seq.size() == 4);
    seq.permute(PermutationOp({3, 0, 2, 1}));
    // |1> now sits at 3, the bell halves at 0 and 2, |0> at 1.
    CHECK(seq.measure(3, z_basis(), rng) == 1);
    CHECK(seq.measure(1, z_basis(), rng) == 0);
    CHECK(seq.bell_measure(0, 2, rng) == 3);
}

TEST_CASE("replacing half of a bell pair leaves the partner maximally mixed") {
    Rng rng(33);
    const std::uint64_t n = 4000;
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        QubitSequence seq;
        seq.append(prepare_named(StateLabel::PhiPlus));
        seq.replace(0, prepare_named(StateLabel::XPlus), rng);
        CHECK(seq.probabilities(0, x_basis())[0] == doctest::Approx(1.0));
        ones += seq.measure(1, z_basis(), rng);
    }
    CHECK(oracle::wilson_contains(ones, n, 4.0, 0.5));
}
