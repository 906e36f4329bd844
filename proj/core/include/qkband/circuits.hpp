#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qkband/statevector.hpp"

namespace qkband {

enum class CircuitFamily { SeparableRX, IQP, HzyCz, YzCx, ZEmbedding };

const char* family_name(CircuitFamily family);
CircuitFamily parse_family(const std::string& name);

/// Layered data-encoding circuit. The program produced for a data point is a
/// deterministic function of (spec, point); fixed rotation parameters are
/// drawn once from param_seed.
struct CircuitSpec {
    CircuitFamily family;
    int n_qubits = 1;
    int layers = 1;
    std::vector<double> params;  // radians; empty for families without p
    std::uint64_t param_seed = 1;

    bool operator==(const CircuitSpec&) const = default;
};

/// Number of fixed parameters a family requires. HzyCz uses 2*n per layer
/// (one R_Y row plus one entangling row); YzCx uses 2*n shared across all
/// layers; the rest take none.
std::size_t required_param_count(CircuitFamily family, int n_qubits, int layers);

/// Fixed parameters, uniform in [0, 2*pi), reproducible from the seed.
std::vector<double> init_params(CircuitFamily family, int n_qubits, int layers,
                                std::uint64_t seed);

/// Spec with params filled in from init_params.
CircuitSpec make_circuit_spec(CircuitFamily family, int n_qubits, int layers,
                              std::uint64_t param_seed = 1);

struct EncodedProgram {
    std::vector<GateOp> gates;
};

/// Gate program encoding one (already bandwidth-rescaled) data point.
EncodedProgram build_program(const CircuitSpec& spec, std::span<const double> x_scaled);

/// Closed-form gate count of build_program's output, as a function of (n, L).
std::size_t expected_gate_count(CircuitFamily family, int n_qubits, int layers);

/// Runs the program on |0...0>.
Statevector encode_state(const CircuitSpec& spec, std::span<const double> x_scaled);

}  // namespace qkband
