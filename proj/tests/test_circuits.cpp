#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qkband/circuits.hpp"
#include "qkband/kernels.hpp"
#include "qkband/rng.hpp"

using namespace qkband;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("separable RX layout: L layers of per-qubit rotations") {
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::SeparableRX, 3, 2);
    const double x[] = {0.3, -0.7, 1.9};
    const EncodedProgram prog = build_program(spec, x);
    REQUIRE(prog.gates.size() == 6);
    for (int layer = 0; layer < 2; ++layer)
        for (int q = 0; q < 3; ++q) {
            const GateOp& g = prog.gates[static_cast<std::size_t>(layer * 3 + q)];
            CHECK(g.kind == GateKind::RX);
            CHECK(g.qubits[0] == q);
            CHECK(g.angle == x[q]);
        }
}

TEST_CASE("separable RX with zero input acts as identity") {
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::SeparableRX, 1, 1);
    const double x[] = {0.0};
    const Statevector s = encode_state(spec, x);
    CHECK(std::abs(s.amplitude(0) - cx{1, 0}) < 1e-15);
}

TEST_CASE("IQP layer structure for two qubits") {
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::IQP, 2, 1);
    const double x[] = {0.4, -1.1};
    const EncodedProgram prog = build_program(spec, x);
    REQUIRE(prog.gates.size() == 7);
    CHECK(prog.gates[0] == GateOp::h(0));
    CHECK(prog.gates[1] == GateOp::h(1));
    CHECK(prog.gates[2] == GateOp::phase(0, 2 * x[0]));
    CHECK(prog.gates[3] == GateOp::phase(1, 2 * x[1]));
    CHECK(prog.gates[4] == GateOp::cnot(0, 1));
    CHECK(prog.gates[5] == GateOp::phase(1, 2 * x[0] * x[1]));
    CHECK(prog.gates[6] == GateOp::cnot(0, 1));
}

TEST_CASE("IQP pair blocks run lexicographically and land on the higher qubit") {
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::IQP, 3, 1);
    const double x[] = {0.5, 0.7, -0.2};
    const EncodedProgram prog = build_program(spec, x);
    // 3 H + 3 single phases + 3 pair blocks of 3 gates.
    REQUIRE(prog.gates.size() == 15);
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int p = 0; p < 3; ++p) {
        const std::size_t base = 6 + 3 * static_cast<std::size_t>(p);
        const int j = pairs[p][0], k = pairs[p][1];
        CHECK(prog.gates[base] == GateOp::cnot(j, k));
        CHECK(prog.gates[base + 1] == GateOp::phase(k, 2 * x[j] * x[k]));
        CHECK(prog.gates[base + 2] == GateOp::cnot(j, k));
    }
}

TEST_CASE("HZY_CZ rows and entangling ring") {
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::HzyCz, 3, 1, 1);
    REQUIRE(spec.params.size() == 6);
    const double x[] = {0.1, 0.2, 0.3};
    const EncodedProgram prog = build_program(spec, x);
    REQUIRE(prog.gates.size() == 3 + 3 + 3 + 3 * 4);
    for (int q = 0; q < 3; ++q) {
        CHECK(prog.gates[static_cast<std::size_t>(q)] == GateOp::h(q));
        CHECK(prog.gates[static_cast<std::size_t>(3 + q)] == GateOp::rz(q, x[q]));
        CHECK(prog.gates[static_cast<std::size_t>(6 + q)] ==
              GateOp::ry(q, spec.params[static_cast<std::size_t>(q)]));
    }
    // Ring edge i: controlled-RZ(params[3+i]) from qubit i onto (i+1) mod 3,
    // emitted as RZ/CNOT/RZ/CNOT.
    for (int i = 0; i < 3; ++i) {
        const std::size_t base = 9 + 4 * static_cast<std::size_t>(i);
        const int control = i, target = (i + 1) % 3;
        const double theta = spec.params[static_cast<std::size_t>(3 + i)];
        CHECK(prog.gates[base] == GateOp::rz(target, theta / 2));
        CHECK(prog.gates[base + 1] == GateOp::cnot(control, target));
        CHECK(prog.gates[base + 2] == GateOp::rz(target, -theta / 2));
        CHECK(prog.gates[base + 3] == GateOp::cnot(control, target));
    }
}

TEST_CASE("HZY_CZ with one qubit emits no entangler") {
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::HzyCz, 1, 2);
    const double x[] = {0.4};
    const EncodedProgram prog = build_program(spec, x);
    CHECK(prog.gates.size() == 6);  // (H, RZ, RY) per layer
    for (const GateOp& g : prog.gates) CHECK_FALSE(g.is_two_qubit());
}

TEST_CASE("YZ_CX alternates the halves of the CNOT ring per layer") {
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::YzCx, 3, 2, 1);
    REQUIRE(spec.params.size() == 6);
    const double x[] = {1.0, 2.0, 3.0};
    const EncodedProgram prog = build_program(spec, x);
    REQUIRE(prog.gates.size() == expected_gate_count(CircuitFamily::YzCx, 3, 2));

    // Layer 1: rotation rows share p across layers, then edges (0->1), (2->0).
    for (int q = 0; q < 3; ++q) {
        CHECK(prog.gates[static_cast<std::size_t>(2 * q)] ==
              GateOp::ry(q, spec.params[static_cast<std::size_t>(2 * q)] + x[q]));
        CHECK(prog.gates[static_cast<std::size_t>(2 * q + 1)] ==
              GateOp::rz(q, spec.params[static_cast<std::size_t>(2 * q + 1)] + x[q]));
    }
    CHECK(prog.gates[6] == GateOp::cnot(0, 1));
    CHECK(prog.gates[7] == GateOp::cnot(2, 0));
    // Layer 2: same rotations again, then the remaining edge (1->2).
    for (int q = 0; q < 3; ++q) {
        CHECK(prog.gates[static_cast<std::size_t>(8 + 2 * q)] ==
              GateOp::ry(q, spec.params[static_cast<std::size_t>(2 * q)] + x[q]));
    }
    CHECK(prog.gates[14] == GateOp::cnot(1, 2));
}

TEST_CASE("Z embedding uses the descending CNOT chain") {
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::ZEmbedding, 3, 2);
    const double x[] = {0.2, 0.4, 0.6};
    const EncodedProgram prog = build_program(spec, x);
    REQUIRE(prog.gates.size() == 16);
    for (int layer = 0; layer < 2; ++layer) {
        const std::size_t base = static_cast<std::size_t>(layer) * 8;
        for (int q = 0; q < 3; ++q) {
            CHECK(prog.gates[base + static_cast<std::size_t>(q)] == GateOp::h(q));
            CHECK(prog.gates[base + static_cast<std::size_t>(3 + q)] == GateOp::phase(q, x[q]));
        }
        CHECK(prog.gates[base + 6] == GateOp::cnot(1, 2));
        CHECK(prog.gates[base + 7] == GateOp::cnot(0, 1));
    }
}

TEST_CASE("init_params: families without parameters get none") {
    CHECK(init_params(CircuitFamily::SeparableRX, 5, 3, 1).empty());
    CHECK(init_params(CircuitFamily::IQP, 5, 3, 1).empty());
    CHECK(init_params(CircuitFamily::ZEmbedding, 5, 3, 1).empty());
}

TEST_CASE("init_params is deterministic and uniform in [0, 2pi)") {
    const auto a = init_params(CircuitFamily::HzyCz, 3, 1, 1);
    const auto b = init_params(CircuitFamily::HzyCz, 3, 1, 1);
    REQUIRE(a.size() == 6);
    CHECK(a == b);
    for (double v : a) {
        CHECK(v >= 0.0);
        CHECK(v < 2 * kPi);
    }
    CHECK(init_params(CircuitFamily::HzyCz, 3, 1, 2) != a);
    // YZ_CX shares one 2n block across layers.
    CHECK(init_params(CircuitFamily::YzCx, 3, 1, 1) == init_params(CircuitFamily::YzCx, 3, 4, 1));
    CHECK(init_params(CircuitFamily::YzCx, 3, 2, 1).size() == 6);
}

TEST_CASE("programs are deterministic functions of spec and input") {
    Rng rng(3);
    for (CircuitFamily fam : {CircuitFamily::SeparableRX, CircuitFamily::IQP,
                              CircuitFamily::HzyCz, CircuitFamily::YzCx,
                              CircuitFamily::ZEmbedding}) {
        const CircuitSpec spec = make_circuit_spec(fam, 4, 2);
        std::vector<double> x(4);
        for (double& v : x) v = rng.uniform(-kPi, kPi);
        CHECK(build_program(spec, x).gates == build_program(spec, x).gates);
    }
}

TEST_CASE("gate counts follow the closed forms") {
    for (CircuitFamily fam : {CircuitFamily::SeparableRX, CircuitFamily::IQP,
                              CircuitFamily::HzyCz, CircuitFamily::YzCx,
                              CircuitFamily::ZEmbedding}) {
        for (int n = 1; n <= 8; ++n) {
            for (int layers = 1; layers <= 4; ++layers) {
                const CircuitSpec spec = make_circuit_spec(fam, n, layers);
                const std::vector<double> x(static_cast<std::size_t>(n), 0.25);
                CHECK(build_program(spec, x).gates.size() ==
                      expected_gate_count(fam, n, layers));
            }
        }
    }
}

TEST_CASE("IQP pair-term count per layer is n(n-1)/2") {
    for (int n = 2; n <= 8; ++n) {
        const CircuitSpec spec = make_circuit_spec(CircuitFamily::IQP, n, 1);
        const std::vector<double> x(static_cast<std::size_t>(n), 0.5);
        const EncodedProgram prog = build_program(spec, x);
        std::size_t pair_phases = 0;
        for (std::size_t g = static_cast<std::size_t>(2 * n); g < prog.gates.size(); ++g)
            if (prog.gates[g].kind == GateKind::Phase) ++pair_phases;
        CHECK(pair_phases == static_cast<std::size_t>(n * (n - 1) / 2));
    }
}

TEST_CASE("bandwidth scaling composes into the closed-form kernel") {
    Rng rng(17);
    for (int n : {1, 2, 4, 6}) {
        const CircuitSpec spec = make_circuit_spec(CircuitFamily::SeparableRX, n, 2);
        for (double c : {0.05, 0.7, 3.0}) {
            std::vector<double> x(static_cast<std::size_t>(n)), y(x.size());
            for (double& v : x) v = c * rng.uniform(-kPi, kPi);
            for (double& v : y) v = c * rng.uniform(-kPi, kPi);
            const double sim = fidelity(encode_state(spec, x), encode_state(spec, y));
            const double closed = k_sep_rx_analytic(n, 2, x, y);
            CHECK(std::fabs(sim - closed) < 1e-10);
        }
    }
}

TEST_CASE("input validation") {
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::IQP, 3, 1);
    const double x[] = {1.0, 2.0};
    CHECK_THROWS_AS(build_program(spec, x), std::invalid_argument);
    CircuitSpec bad = make_circuit_spec(CircuitFamily::HzyCz, 3, 2);
    bad.params.pop_back();
    const double x3[] = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(build_program(bad, x3), std::invalid_argument);
}

TEST_CASE("family names round-trip") {
    for (CircuitFamily fam : {CircuitFamily::SeparableRX, CircuitFamily::IQP,
                              CircuitFamily::HzyCz, CircuitFamily::YzCx,
                              CircuitFamily::ZEmbedding})
        CHECK(parse_family(family_name(fam)) == fam);
    CHECK_THROWS_AS(parse_family("bogus"), std::invalid_argument);
}
