#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "qkband/circuits.hpp"
#include "qkband/matrix.hpp"

namespace qkband {

enum class KernelKind { FQK, PQK, RBF, Poly };

const char* kernel_name(KernelKind kind);
KernelKind parse_kernel(const std::string& name);

/// Kernel selection plus hyperparameters. bandwidth is the global rescaling
/// factor applied to raw features before encoding (x_tilde = c * x); gamma is
/// the PQK outer length-scale; poly_order is the truncation order t of the
/// alternating-series kernel (indefinite for large distances by design).
struct KernelSpec {
    KernelKind kind = KernelKind::RBF;
    std::optional<CircuitSpec> circuit;  // required for FQK/PQK
    double gamma = 1.0;
    double bandwidth = 1.0;
    int poly_order = 2;
};

/// N x N kernel matrix with its provenance. Symmetric; diagonal pinned to
/// exactly 1 for FQK/PQK/RBF (and 1 by construction for Poly).
struct GramMatrix {
    Matrix values;
    KernelSpec spec;
    std::uint64_t data_hash = 0;
};

// Pointwise kernels. Inputs are already bandwidth-rescaled; gram() and
// cross_gram() apply the rescaling internally.
double k_fqk(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);
double k_pqk(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);
double k_rbf(std::span<const double> x, std::span<const double> y);
double k_poly(int order, std::span<const double> x, std::span<const double> y);

/// Product of squared cosines of half the per-coordinate differences; the
/// closed form of the separable-R_X fidelity kernel. Used as an oracle for
/// the statevector path.
double k_sep_rx_analytic(int n, int layers, std::span<const double> x,
                         std::span<const double> y);

/// Closed form of the separable-R_X projected kernel with an RBF outer
/// function: exp(-2 gamma (n - sum_k cos(L (x_k - y_k)))).
double k_sep_rx_pqk_analytic(int n, int layers, double gamma, std::span<const double> x,
                             std::span<const double> y);

/// FNV-1a digest of a matrix's raw contents (shape + bytes).
std::uint64_t content_hash(const Matrix& data);

/// Assembles the full Gram matrix: rescales rows by spec.bandwidth, computes
/// the per-row features once (statevectors for FQK, Pauli-expectation rows
/// for PQK), fills the upper triangle in parallel, mirrors, and pins the
/// diagonal.
GramMatrix gram(const KernelSpec& spec, const Matrix& data);

/// test x train kernel matrix with the same feature reuse.
Matrix cross_gram(const KernelSpec& spec, const Matrix& test_data, const Matrix& train_data);

/// Row-major CSV with `#`-prefixed metadata lines describing the spec.
void write_gram_csv(const GramMatrix& g, std::ostream& out);
void write_gram_csv(const GramMatrix& g, const std::string& path);

}  // namespace qkband
