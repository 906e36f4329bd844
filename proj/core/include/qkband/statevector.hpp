#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "qkband/matrix.hpp"

namespace qkband {

using cx = std::complex<double>;

enum class GateKind { H, RX, RY, RZ, Phase, CNOT, CZ };

/// One gate in an encoding program. Qubit 0 is the least significant bit of
/// the amplitude index. Rotation conventions: RX(t)=exp(-i t X/2),
/// RY(t)=exp(-i t Y/2), RZ(t)=exp(-i t Z/2), Phase(t)=diag(1, e^{i t}).
struct GateOp {
    GateKind kind;
    double angle = 0.0;               // unused for H/CNOT/CZ
    std::array<int, 2> qubits{-1, -1};  // single-qubit gates use qubits[0]

    static GateOp h(int q) { return {GateKind::H, 0.0, {q, -1}}; }
    static GateOp rx(int q, double a) { return {GateKind::RX, a, {q, -1}}; }
    static GateOp ry(int q, double a) { return {GateKind::RY, a, {q, -1}}; }
    static GateOp rz(int q, double a) { return {GateKind::RZ, a, {q, -1}}; }
    static GateOp phase(int q, double a) { return {GateKind::Phase, a, {q, -1}}; }
    static GateOp cnot(int control, int target) { return {GateKind::CNOT, 0.0, {control, target}}; }
    static GateOp cz(int a, int b) { return {GateKind::CZ, 0.0, {a, b}}; }

    bool is_two_qubit() const { return kind == GateKind::CNOT || kind == GateKind::CZ; }
    bool operator==(const GateOp&) const = default;
};

/// Dense amplitude vector of an n-qubit pure state. Values are immutable from
/// the caller's perspective; apply_gate returns a new state. Gate application
/// mutates a private copy in place.
class Statevector {
public:
    static constexpr int kMaxQubits = 24;  // ~256 MiB of complex doubles

    explicit Statevector(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cx>& amplitudes() const { return amps_; }
    cx amplitude(std::size_t i) const { return amps_[i]; }

    double norm_sq() const;
    void apply_in_place(const GateOp& g);

private:
    int n_qubits_;
    std::vector<cx> amps_;
};

Statevector init_zero(int n_qubits);
Statevector apply_gate(const Statevector& state, const GateOp& g);

/// Single-qubit Pauli expectations from the 1-RDM of every qubit, computed by
/// direct amplitude contraction (the full density matrix is never formed).
/// Row k of the result holds <X_k>, <Y_k>, <Z_k>.
Matrix pauli_expectations_1rdm(const Statevector& state);

/// |<a|b>|^2; equals the Hilbert-Schmidt inner product of the two pure-state
/// density matrices.
double fidelity(const Statevector& a, const Statevector& b);

}  // namespace qkband
