#include "qkband/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkband {

namespace {

constexpr double kNormTol = 1e-9;

void check_qubit(int q, int n_qubits) {
    if (q < 0 || q >= n_qubits)
        throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range for " +
                                    std::to_string(n_qubits) + " qubits");
}

void check_normalized(const Statevector& s, const char* what) {
    if (std::fabs(s.norm_sq() - 1.0) > kNormTol)
        throw std::invalid_argument(std::string(what) + ": state is not normalized");
}

// Applies the 2x2 matrix [[u00, u01], [u10, u11]] to qubit q.
void apply_1q(std::vector<cx>& a, int q, cx u00, cx u01, cx u10, cx u11) {
    const std::size_t bit = std::size_t{1} << q;
    const std::size_t dim = a.size();
    for (std::size_t base = 0; base < dim; base += 2 * bit) {
        for (std::size_t off = 0; off < bit; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + bit;
            const cx a0 = a[i0], a1 = a[i1];
            a[i0] = u00 * a0 + u01 * a1;
            a[i1] = u10 * a0 + u11 * a1;
        }
    }
}

}  // namespace

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw std::length_error("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                                "], got " + std::to_string(n_qubits));
    amps_.assign(std::size_t{1} << n_qubits, cx{0.0, 0.0});
    amps_[0] = cx{1.0, 0.0};
}

double Statevector::norm_sq() const {
    double s = 0.0;
    for (const cx& a : amps_) s += std::norm(a);
    return s;
}

void Statevector::apply_in_place(const GateOp& g) {
    const int q0 = g.qubits[0];
    check_qubit(q0, n_qubits_);
    if (g.is_two_qubit()) {
        const int q1 = g.qubits[1];
        check_qubit(q1, n_qubits_);
        if (q0 == q1) throw std::invalid_argument("two-qubit gate needs distinct qubits");
    }

    switch (g.kind) {
        case GateKind::H: {
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            apply_1q(amps_, q0, {inv_sqrt2, 0}, {inv_sqrt2, 0}, {inv_sqrt2, 0}, {-inv_sqrt2, 0});
            break;
        }
        case GateKind::RX: {
            const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
            apply_1q(amps_, q0, {c, 0}, {0, -s}, {0, -s}, {c, 0});
            break;
        }
        case GateKind::RY: {
            const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
            apply_1q(amps_, q0, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
            break;
        }
        case GateKind::RZ: {
            const cx e0 = std::polar(1.0, -g.angle / 2), e1 = std::polar(1.0, g.angle / 2);
            const std::size_t bit = std::size_t{1} << q0;
            for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & bit) ? e1 : e0;
            break;
        }
        case GateKind::Phase: {
            const cx e1 = std::polar(1.0, g.angle);
            const std::size_t bit = std::size_t{1} << q0;
            for (std::size_t i = 0; i < amps_.size(); ++i)
                if (i & bit) amps_[i] *= e1;
            break;
        }
        case GateKind::CNOT: {
            const std::size_t cbit = std::size_t{1} << q0;
            const std::size_t tbit = std::size_t{1} << g.qubits[1];
            for (std::size_t i = 0; i < amps_.size(); ++i)
                if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
            break;
        }
        case GateKind::CZ: {
            const std::size_t mask = (std::size_t{1} << q0) | (std::size_t{1} << g.qubits[1]);
            for (std::size_t i = 0; i < amps_.size(); ++i)
                if ((i & mask) == mask) amps_[i] = -amps_[i];
            break;
        }
    }
}

Statevector init_zero(int n_qubits) { return Statevector(n_qubits); }

Statevector apply_gate(const Statevector& state, const GateOp& g) {
    Statevector out = state;
    out.apply_in_place(g);
    return out;
}

Matrix pauli_expectations_1rdm(const Statevector& state) {
    check_normalized(state, "pauli_expectations_1rdm");
    const int n = state.n_qubits();
    const auto& a = state.amplitudes();
    Matrix out(static_cast<std::size_t>(n), 3, 0.0);
    for (int k = 0; k < n; ++k) {
        const std::size_t bit = std::size_t{1} << k;
        // rho01 = sum over the other qubits of a(k=0) * conj(a(k=1));
        // <X> = 2 Re rho01, <Y> = -2 Im rho01, <Z> = p0 - p1.
        cx rho01{0.0, 0.0};
        double z = 0.0;
        for (std::size_t base = 0; base < a.size(); base += 2 * bit) {
            for (std::size_t off = 0; off < bit; ++off) {
                const std::size_t i0 = base + off;
                const cx a0 = a[i0], a1 = a[i0 + bit];
                rho01 += a0 * std::conj(a1);
                z += std::norm(a0) - std::norm(a1);
            }
        }
        out(k, 0) = 2.0 * rho01.real();
        out(k, 1) = -2.0 * rho01.imag();
        out(k, 2) = z;
    }
    return out;
}

double fidelity(const Statevector& a, const Statevector& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("fidelity: qubit count mismatch");
    check_normalized(a, "fidelity");
    check_normalized(b, "fidelity");
    cx overlap{0.0, 0.0};
    const auto& va = a.amplitudes();
    const auto& vb = b.amplitudes();
    for (std::size_t i = 0; i < va.size(); ++i) overlap += std::conj(va[i]) * vb[i];
    return std::norm(overlap);
}

}  // namespace qkband
