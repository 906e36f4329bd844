#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qkband/rng.hpp"
#include "qkband/statevector.hpp"
#include "oracles.hpp"

using namespace qkband;

namespace {

constexpr double kPi = std::numbers::pi;

GateOp random_gate(Rng& rng, int n_qubits) {
    const int pick = static_cast<int>(rng.below(7));
    const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits)));
    const double angle = rng.uniform(-kPi, kPi);
    switch (pick) {
        case 0: return GateOp::h(q);
        case 1: return GateOp::rx(q, angle);
        case 2: return GateOp::ry(q, angle);
        case 3: return GateOp::rz(q, angle);
        case 4: return GateOp::phase(q, angle);
        default: {
            if (n_qubits < 2) return GateOp::rx(q, angle);
            int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits - 1)));
            if (r >= q) ++r;
            return pick == 5 ? GateOp::cnot(q, r) : GateOp::cz(q, r);
        }
    }
}

}  // namespace

TEST_CASE("init_zero puts all weight on the zero basis state") {
    const Statevector s1 = init_zero(1);
    CHECK(s1.amplitudes() == std::vector<cx>{{1, 0}, {0, 0}});
    const Statevector s2 = init_zero(2);
    CHECK(s2.dim() == 4);
    CHECK(s2.amplitude(0) == cx{1, 0});
    const Statevector s3 = init_zero(3);
    CHECK(s3.dim() == 8);
    CHECK(s3.amplitude(0) == cx{1, 0});
    for (std::size_t i = 1; i < 8; ++i) CHECK(s3.amplitude(i) == cx{0, 0});
}

TEST_CASE("init_zero rejects out-of-range qubit counts") {
    CHECK_THROWS_AS(init_zero(0), std::length_error);
    CHECK_THROWS_AS(init_zero(-3), std::length_error);
    CHECK_THROWS_AS(init_zero(25), std::length_error);
}

TEST_CASE("single gates act as their matrices") {
    SUBCASE("RX(pi)|0> = -i|1>") {
        const Statevector s = apply_gate(init_zero(1), GateOp::rx(0, kPi));
        CHECK(std::abs(s.amplitude(0)) < 1e-15);
        CHECK(std::abs(s.amplitude(1) - cx{0, -1}) < 1e-15);
    }
    SUBCASE("H|0> is the plus state") {
        const Statevector s = apply_gate(init_zero(1), GateOp::h(0));
        const double r = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(s.amplitude(0) - cx{r, 0}) < 1e-15);
        CHECK(std::abs(s.amplitude(1) - cx{r, 0}) < 1e-15);
    }
    SUBCASE("CNOT flips the target when the control is set") {
        // |q1 q0> = |01>: control qubit 0 is set.
        Statevector s = init_zero(2);
        s.apply_in_place(GateOp::rx(0, kPi));  // -i|01>
        s.apply_in_place(GateOp::cnot(0, 1));
        CHECK(std::abs(s.amplitude(3) - cx{0, -1}) < 1e-15);
        CHECK(std::norm(s.amplitude(1)) < 1e-30);
    }
}

TEST_CASE("gate validation") {
    Statevector s = init_zero(2);
    CHECK_THROWS_AS(s.apply_in_place(GateOp::h(2)), std::invalid_argument);
    CHECK_THROWS_AS(s.apply_in_place(GateOp::h(-1)), std::invalid_argument);
    CHECK_THROWS_AS(s.apply_in_place(GateOp::cnot(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(s.apply_in_place(GateOp::cz(1, 3)), std::invalid_argument);
}

TEST_CASE("pauli expectations of simple states") {
    SUBCASE("|0>") {
        const Matrix p = pauli_expectations_1rdm(init_zero(1));
        CHECK(p(0, 0) == doctest::Approx(0.0));
        CHECK(p(0, 1) == doctest::Approx(0.0));
        CHECK(p(0, 2) == doctest::Approx(1.0));
    }
    SUBCASE("RX(x)|0> over a grid of angles") {
        for (double x = -3.0; x <= 3.0; x += 0.37) {
            const Statevector s = apply_gate(init_zero(1), GateOp::rx(0, x));
            const Matrix p = pauli_expectations_1rdm(s);
            CHECK(std::fabs(p(0, 0)) < 1e-14);
            CHECK(p(0, 1) == doctest::Approx(-std::sin(x)));
            CHECK(p(0, 2) == doctest::Approx(std::cos(x)));
        }
    }
    SUBCASE("(H|0>) tensor |0>") {
        Statevector s = init_zero(2);
        s.apply_in_place(GateOp::h(0));
        const Matrix p = pauli_expectations_1rdm(s);
        CHECK(p(0, 0) == doctest::Approx(1.0));
        CHECK(p(0, 1) == doctest::Approx(0.0));
        CHECK(p(0, 2) == doctest::Approx(0.0));
        CHECK(p(1, 0) == doctest::Approx(0.0));
        CHECK(p(1, 2) == doctest::Approx(1.0));
    }
}

TEST_CASE("fidelity basics") {
    const Statevector zero = init_zero(1);
    CHECK(fidelity(zero, zero) == doctest::Approx(1.0));
    CHECK(fidelity(zero, apply_gate(zero, GateOp::rx(0, kPi))) == doctest::Approx(0.0));
    CHECK(fidelity(zero, apply_gate(zero, GateOp::rx(0, kPi / 2))) == doctest::Approx(0.5));
    CHECK_THROWS_AS(fidelity(zero, init_zero(2)), std::invalid_argument);
}

TEST_CASE("norm is preserved over long random gate sequences") {
    Rng rng(7);
    for (int n : {1, 2, 4}) {
        Statevector s = init_zero(n);
        for (int g = 0; g < 100; ++g) s.apply_in_place(random_gate(rng, n));
        CHECK(std::fabs(s.norm_sq() - 1.0) < 1e-10);
    }
}

TEST_CASE("shared unitaries preserve fidelity") {
    Rng rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        Statevector a = init_zero(3), b = init_zero(3);
        for (int g = 0; g < 20; ++g) a.apply_in_place(random_gate(rng, 3));
        for (int g = 0; g < 20; ++g) b.apply_in_place(random_gate(rng, 3));
        const double before = fidelity(a, b);
        for (int g = 0; g < 30; ++g) {
            const GateOp u = random_gate(rng, 3);
            a.apply_in_place(u);
            b.apply_in_place(u);
        }
        CHECK(std::fabs(fidelity(a, b) - before) < 1e-10);
    }
}

TEST_CASE("amplitude-contraction expectations match the dense-density-matrix oracle") {
    Rng rng(23);
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 4; ++rep) {
            Statevector s = init_zero(n);
            for (int g = 0; g < 25; ++g) s.apply_in_place(random_gate(rng, n));
            const Matrix fast = pauli_expectations_1rdm(s);
            const Matrix dense = testing::pauli_1rdm_dense_oracle(s);
            for (std::size_t k = 0; k < fast.rows(); ++k)
                for (std::size_t p = 0; p < 3; ++p) {
                    CHECK(std::fabs(fast(k, p) - dense(k, p)) < 1e-10);
                    CHECK(fast(k, p) >= -1.0 - 1e-12);
                    CHECK(fast(k, p) <= 1.0 + 1e-12);
                }
        }
    }
}

TEST_CASE("CZ is symmetric in its qubit arguments") {
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        Statevector a = init_zero(3);
        for (int g = 0; g < 15; ++g) a.apply_in_place(random_gate(rng, 3));
        Statevector b = a;
        a.apply_in_place(GateOp::cz(0, 2));
        b.apply_in_place(GateOp::cz(2, 0));
        CHECK(a.amplitudes() == b.amplitudes());  // bit-exact
    }
}
