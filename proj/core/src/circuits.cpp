#include "qkband/circuits.hpp"

#include <numbers>
#include <stdexcept>

#include "qkband/rng.hpp"

namespace qkband {

namespace {

void check_spec(const CircuitSpec& spec, std::size_t point_dim) {
    if (spec.n_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
    if (spec.layers < 1) throw std::invalid_argument("circuit needs at least one layer");
    if (point_dim != static_cast<std::size_t>(spec.n_qubits))
        throw std::invalid_argument("data point dimension does not match qubit count");
    if (spec.params.size() != required_param_count(spec.family, spec.n_qubits, spec.layers))
        throw std::invalid_argument("parameter vector has wrong length for this family");
}

// Controlled-RZ(theta) with the given control/target, emitted over the
// primitive gate set: RZ(theta/2) on target, CNOT, RZ(-theta/2) on target,
// CNOT. The compound equals diag(1, 1, e^{-i theta/2}, e^{i theta/2}) exactly.
void emit_crz(std::vector<GateOp>& gates, int control, int target, double theta) {
    gates.push_back(GateOp::rz(target, theta / 2));
    gates.push_back(GateOp::cnot(control, target));
    gates.push_back(GateOp::rz(target, -theta / 2));
    gates.push_back(GateOp::cnot(control, target));
}

}  // namespace

const char* family_name(CircuitFamily family) {
    switch (family) {
        case CircuitFamily::SeparableRX: return "separable_rx";
        case CircuitFamily::IQP: return "iqp";
        case CircuitFamily::HzyCz: return "hzy_cz";
        case CircuitFamily::YzCx: return "yz_cx";
        case CircuitFamily::ZEmbedding: return "z_embedding";
    }
    return "unknown";
}

CircuitFamily parse_family(const std::string& name) {
    if (name == "separable_rx") return CircuitFamily::SeparableRX;
    if (name == "iqp") return CircuitFamily::IQP;
    if (name == "hzy_cz") return CircuitFamily::HzyCz;
    if (name == "yz_cx") return CircuitFamily::YzCx;
    if (name == "z_embedding") return CircuitFamily::ZEmbedding;
    throw std::invalid_argument("unknown circuit family: " + name);
}

std::size_t required_param_count(CircuitFamily family, int n_qubits, int layers) {
    const auto n = static_cast<std::size_t>(n_qubits);
    switch (family) {
        case CircuitFamily::HzyCz: return 2 * n * static_cast<std::size_t>(layers);
        case CircuitFamily::YzCx: return 2 * n;
        default: return 0;
    }
}

std::vector<double> init_params(CircuitFamily family, int n_qubits, int layers,
                                std::uint64_t seed) {
    const std::size_t count = required_param_count(family, n_qubits, layers);
    std::vector<double> params(count);
    Rng rng(seed);
    for (double& p : params) p = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return params;
}

CircuitSpec make_circuit_spec(CircuitFamily family, int n_qubits, int layers,
                              std::uint64_t param_seed) {
    CircuitSpec spec{family, n_qubits, layers, {}, param_seed};
    spec.params = init_params(family, n_qubits, layers, param_seed);
    return spec;
}

EncodedProgram build_program(const CircuitSpec& spec, std::span<const double> x) {
    check_spec(spec, x.size());
    const int n = spec.n_qubits;
    EncodedProgram prog;
    prog.gates.reserve(expected_gate_count(spec.family, n, spec.layers));

    for (int layer = 0; layer < spec.layers; ++layer) {
        switch (spec.family) {
            case CircuitFamily::SeparableRX: {
                for (int q = 0; q < n; ++q) prog.gates.push_back(GateOp::rx(q, x[q]));
                break;
            }
            case CircuitFamily::IQP: {
                for (int q = 0; q < n; ++q) prog.gates.push_back(GateOp::h(q));
                for (int q = 0; q < n; ++q) prog.gates.push_back(GateOp::phase(q, 2.0 * x[q]));
                // Pair blocks in lexicographic order (0,1), (0,2), ..., (n-2,n-1).
                for (int j = 0; j < n; ++j) {
                    for (int k = j + 1; k < n; ++k) {
                        prog.gates.push_back(GateOp::cnot(j, k));
                        prog.gates.push_back(GateOp::phase(k, 2.0 * x[j] * x[k]));
                        prog.gates.push_back(GateOp::cnot(j, k));
                    }
                }
                break;
            }
            case CircuitFamily::HzyCz: {
                const std::size_t base = static_cast<std::size_t>(layer) * 2 * n;
                for (int q = 0; q < n; ++q) prog.gates.push_back(GateOp::h(q));
                for (int q = 0; q < n; ++q) prog.gates.push_back(GateOp::rz(q, x[q]));
                for (int q = 0; q < n; ++q)
                    prog.gates.push_back(GateOp::ry(q, spec.params[base + q]));
                // Ring of controlled-RZ: control i, target (i+1) mod n, wrapping
                // n-1 back to 0. Degenerate for a single qubit.
                if (n >= 2) {
                    for (int i = 0; i < n; ++i)
                        emit_crz(prog.gates, i, (i + 1) % n,
                                 spec.params[base + static_cast<std::size_t>(n) + i]);
                }
                break;
            }
            case CircuitFamily::YzCx: {
                for (int q = 0; q < n; ++q) {
                    prog.gates.push_back(GateOp::ry(q, spec.params[2 * q] + x[q]));
                    prog.gates.push_back(GateOp::rz(q, spec.params[2 * q + 1] + x[q]));
                }
                // Alternating halves of the CNOT ring: even layers take edges
                // i -> i+1 for even i (including the wrap edge when n is odd),
                // odd layers the remaining edges.
                if (n >= 2) {
                    for (int i = layer % 2; i < n; i += 2)
                        prog.gates.push_back(GateOp::cnot(i, (i + 1) % n));
                }
                break;
            }
            case CircuitFamily::ZEmbedding: {
                for (int q = 0; q < n; ++q) prog.gates.push_back(GateOp::h(q));
                for (int q = 0; q < n; ++q) prog.gates.push_back(GateOp::phase(q, x[q]));
                // Descending chain: (n-2 -> n-1), then (n-3 -> n-2), ... (0 -> 1).
                for (int i = n - 2; i >= 0; --i) prog.gates.push_back(GateOp::cnot(i, i + 1));
                break;
            }
        }
    }
    return prog;
}

std::size_t expected_gate_count(CircuitFamily family, int n_qubits, int layers) {
    const auto n = static_cast<std::size_t>(n_qubits);
    const auto l = static_cast<std::size_t>(layers);
    switch (family) {
        case CircuitFamily::SeparableRX: return n * l;
        case CircuitFamily::IQP: return l * (2 * n + 3 * (n * (n - 1) / 2));
        case CircuitFamily::HzyCz: return l * (3 * n + (n >= 2 ? 4 * n : 0));
        case CircuitFamily::YzCx: {
            std::size_t count = 0;
            for (std::size_t layer = 0; layer < l; ++layer) {
                count += 2 * n;
                if (n >= 2) count += (layer % 2 == 0) ? (n + 1) / 2 : n / 2;
            }
            return count;
        }
        case CircuitFamily::ZEmbedding: return l * (2 * n + (n - 1));
    }
    return 0;
}

Statevector encode_state(const CircuitSpec& spec, std::span<const double> x_scaled) {
    const EncodedProgram prog = build_program(spec, x_scaled);
    Statevector state(spec.n_qubits);
    for (const GateOp& g : prog.gates) state.apply_in_place(g);
    return state;
}

}  // namespace qkband
