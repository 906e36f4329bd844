#include "qkband/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qkband/parallel.hpp"

namespace qkband {

namespace {

double squared_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("kernel inputs differ in length");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

const CircuitSpec& require_circuit(const KernelSpec& spec) {
    if (!spec.circuit) throw std::invalid_argument("FQK/PQK kernel spec needs a circuit");
    return *spec.circuit;
}

double pqk_from_features(std::span<const double> fx, std::span<const double> fy, double gamma) {
    double s = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        const double d = fx[i] - fy[i];
        s += d * d;
    }
    return std::exp(-gamma * s);
}

void check_gram_inputs(const KernelSpec& spec, const Matrix& data) {
    if (!(spec.bandwidth > 0.0))
        throw std::invalid_argument("bandwidth c must be > 0");
    if (spec.kind == KernelKind::Poly && spec.poly_order < 1)
        throw std::invalid_argument("poly_order must be >= 1");
    for (double v : data.data())
        if (!std::isfinite(v)) throw std::invalid_argument("gram: data contains non-finite values");
    if (spec.kind == KernelKind::FQK || spec.kind == KernelKind::PQK) {
        const CircuitSpec& c = require_circuit(spec);
        if (static_cast<std::size_t>(c.n_qubits) != data.cols())
            throw std::invalid_argument("circuit qubit count must equal the feature dimension");
    }
}

Matrix scaled_copy(const Matrix& data, double c) {
    Matrix out = data;
    for (double& v : out.data()) v *= c;
    return out;
}

// Per-row features reused across all pairs: encoded statevectors for FQK,
// flattened n x 3 Pauli expectation rows for PQK, the scaled rows themselves
// for the classical kernels.
struct RowFeatures {
    std::vector<Statevector> states;
    Matrix pauli;  // N x 3n
    const Matrix* scaled = nullptr;
};

RowFeatures compute_features(const KernelSpec& spec, const Matrix& scaled) {
    RowFeatures f;
    f.scaled = &scaled;
    const std::size_t n_rows = scaled.rows();
    if (spec.kind == KernelKind::FQK) {
        const CircuitSpec& circ = require_circuit(spec);
        f.states.assign(n_rows, Statevector(circ.n_qubits));
        parallel_for(0, n_rows, [&](std::size_t i) {
            f.states[i] = encode_state(circ, {scaled.row(i), scaled.cols()});
        });
    } else if (spec.kind == KernelKind::PQK) {
        const CircuitSpec& circ = require_circuit(spec);
        f.pauli = Matrix(n_rows, 3 * scaled.cols());
        parallel_for(0, n_rows, [&](std::size_t i) {
            const Statevector s = encode_state(circ, {scaled.row(i), scaled.cols()});
            const Matrix p = pauli_expectations_1rdm(s);
            std::memcpy(f.pauli.row(i), p.data().data(), sizeof(double) * p.data().size());
        });
    }
    return f;
}

double pair_value(const KernelSpec& spec, const RowFeatures& f, std::size_t i, std::size_t j) {
    switch (spec.kind) {
        case KernelKind::FQK:
            return fidelity(f.states[i], f.states[j]);
        case KernelKind::PQK:
            return pqk_from_features({f.pauli.row(i), f.pauli.cols()},
                                     {f.pauli.row(j), f.pauli.cols()}, spec.gamma);
        case KernelKind::RBF:
            return k_rbf({f.scaled->row(i), f.scaled->cols()}, {f.scaled->row(j), f.scaled->cols()});
        case KernelKind::Poly:
            return k_poly(spec.poly_order, {f.scaled->row(i), f.scaled->cols()},
                          {f.scaled->row(j), f.scaled->cols()});
    }
    return 0.0;
}

double pair_value_cross(const KernelSpec& spec, const RowFeatures& fa, const RowFeatures& fb,
                        std::size_t i, std::size_t j) {
    switch (spec.kind) {
        case KernelKind::FQK:
            return fidelity(fa.states[i], fb.states[j]);
        case KernelKind::PQK:
            return pqk_from_features({fa.pauli.row(i), fa.pauli.cols()},
                                     {fb.pauli.row(j), fb.pauli.cols()}, spec.gamma);
        case KernelKind::RBF:
            return k_rbf({fa.scaled->row(i), fa.scaled->cols()},
                         {fb.scaled->row(j), fb.scaled->cols()});
        case KernelKind::Poly:
            return k_poly(spec.poly_order, {fa.scaled->row(i), fa.scaled->cols()},
                          {fb.scaled->row(j), fb.scaled->cols()});
    }
    return 0.0;
}

}  // namespace

const char* kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::FQK: return "fqk";
        case KernelKind::PQK: return "pqk";
        case KernelKind::RBF: return "rbf";
        case KernelKind::Poly: return "poly";
    }
    return "unknown";
}

KernelKind parse_kernel(const std::string& name) {
    if (name == "fqk") return KernelKind::FQK;
    if (name == "pqk") return KernelKind::PQK;
    if (name == "rbf") return KernelKind::RBF;
    if (name == "poly") return KernelKind::Poly;
    throw std::invalid_argument("unknown kernel kind: " + name);
}

double k_fqk(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("k_fqk: length mismatch");
    const CircuitSpec& circ = require_circuit(spec);
    return fidelity(encode_state(circ, x), encode_state(circ, y));
}

double k_pqk(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("k_pqk: length mismatch");
    const CircuitSpec& circ = require_circuit(spec);
    const Matrix fx = pauli_expectations_1rdm(encode_state(circ, x));
    const Matrix fy = pauli_expectations_1rdm(encode_state(circ, y));
    return pqk_from_features({fx.data().data(), fx.data().size()},
                             {fy.data().data(), fy.data().size()}, spec.gamma);
}

double k_rbf(std::span<const double> x, std::span<const double> y) {
    return std::exp(-squared_distance(x, y));
}

double k_poly(int order, std::span<const double> x, std::span<const double> y) {
    if (order < 1) throw std::invalid_argument("k_poly: order must be >= 1");
    const double r2 = squared_distance(x, y);
    double term = 1.0, sum = 1.0;
    for (int s = 1; s <= order; ++s) {
        term *= -r2 / static_cast<double>(s);
        sum += term;
    }
    return sum;
}

double k_sep_rx_analytic(int n, int layers, std::span<const double> x,
                         std::span<const double> y) {
    if (x.size() != y.size() || x.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("k_sep_rx_analytic: length mismatch");
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
        const double c = std::cos(layers * (x[i] - y[i]) / 2.0);
        prod *= c * c;
    }
    return prod;
}

double k_sep_rx_pqk_analytic(int n, int layers, double gamma, std::span<const double> x,
                             std::span<const double> y) {
    if (x.size() != y.size() || x.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("k_sep_rx_pqk_analytic: length mismatch");
    double cos_sum = 0.0;
    for (int i = 0; i < n; ++i) cos_sum += std::cos(layers * (x[i] - y[i]));
    return std::exp(-2.0 * gamma * (static_cast<double>(n) - cos_sum));
}

std::uint64_t content_hash(const Matrix& data) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* bytes, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(bytes);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    const std::uint64_t rows = data.rows(), cols = data.cols();
    mix(&rows, sizeof rows);
    mix(&cols, sizeof cols);
    mix(data.data().data(), data.data().size() * sizeof(double));
    return h;
}

GramMatrix gram(const KernelSpec& spec, const Matrix& data) {
    if (data.rows() < 2) throw std::invalid_argument("gram: need at least two rows");
    check_gram_inputs(spec, data);
    const Matrix scaled = scaled_copy(data, spec.bandwidth);
    const RowFeatures features = compute_features(spec, scaled);
    const std::size_t n = data.rows();

    GramMatrix result{Matrix(n, n, 0.0), spec, content_hash(data)};
    Matrix& k = result.values;
    parallel_for(0, n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) k(i, j) = pair_value(spec, features, i, j);
    });
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;  // analytic diagonal, no simulator drift
        for (std::size_t j = i + 1; j < n; ++j) k(j, i) = k(i, j);
    }
    return result;
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& test_data, const Matrix& train_data) {
    if (test_data.cols() != train_data.cols())
        throw std::invalid_argument("cross_gram: feature dimension mismatch");
    check_gram_inputs(spec, train_data);
    for (double v : test_data.data())
        if (!std::isfinite(v))
            throw std::invalid_argument("cross_gram: data contains non-finite values");

    const Matrix scaled_test = scaled_copy(test_data, spec.bandwidth);
    const Matrix scaled_train = scaled_copy(train_data, spec.bandwidth);
    const RowFeatures ft = compute_features(spec, scaled_test);
    const RowFeatures fr = compute_features(spec, scaled_train);

    Matrix k(test_data.rows(), train_data.rows(), 0.0);
    parallel_for(0, test_data.rows(), [&](std::size_t i) {
        for (std::size_t j = 0; j < train_data.rows(); ++j)
            k(i, j) = pair_value_cross(spec, ft, fr, i, j);
    });
    return k;
}

void write_gram_csv(const GramMatrix& g, std::ostream& out) {
    char buf[40];
    out << "# qkband-gram-v1\n";
    out << "# kernel=" << kernel_name(g.spec.kind) << "\n";
    if (g.spec.circuit) {
        out << "# circuit=" << family_name(g.spec.circuit->family)
            << " n_qubits=" << g.spec.circuit->n_qubits << " layers=" << g.spec.circuit->layers
            << " param_seed=" << g.spec.circuit->param_seed << "\n";
    }
    std::snprintf(buf, sizeof buf, "%.17g", g.spec.bandwidth);
    out << "# bandwidth=" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", g.spec.gamma);
    out << "# gamma=" << buf << "\n";
    if (g.spec.kind == KernelKind::Poly) out << "# poly_order=" << g.spec.poly_order << "\n";
    out << "# data_hash=" << g.data_hash << "\n";
    out << "# rows=" << g.values.rows() << " cols=" << g.values.cols() << "\n";
    for (std::size_t i = 0; i < g.values.rows(); ++i) {
        for (std::size_t j = 0; j < g.values.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", g.values(i, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
}

void write_gram_csv(const GramMatrix& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_gram_csv(g, out);
}

}  // namespace qkband
