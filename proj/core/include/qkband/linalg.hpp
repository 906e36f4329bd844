#pragma once

#include <functional>
#include <vector>

#include "qkband/matrix.hpp"

namespace qkband {

/// Eigendecomposition of a symmetric matrix. Eigenvalues descending;
/// eigenvector columns match by index (empty matrix when values-only).
struct SymEig {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// Householder tridiagonalization followed by implicit-shift QL. The
/// production path: O(n^3) with a small constant, fine for the N=720 Gram
/// matrices this project diagonalizes by the hundred.
SymEig sym_eig(const Matrix& a, bool vectors = true);

/// Cyclic Jacobi (off-diagonal norm 1e-12, at most 100 sweeps). Slower but
/// independent of sym_eig; kept as a cross-check and for small problems.
SymEig sym_eig_jacobi(const Matrix& a, bool vectors = true);

/// Q diag(f(eigenvalue)) Q^T.
Matrix spectral_apply(const SymEig& eig, const std::function<double(double)>& f);

/// Spectral factorization with eigenvalues clamped at zero, used for matrix
/// square roots and regularized inverse powers of nearly-PSD Gram matrices.
struct PsdFactor {
    Matrix eigenvectors;
    std::vector<double> eigenvalues;  // descending, >= 0

    Matrix reconstruct() const;
    Matrix sqrt_matrix() const;
    double min_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
};

PsdFactor psd_factor(const Matrix& k);

}  // namespace qkband
