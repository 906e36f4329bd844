#include "qkband/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qkband {

namespace {

void check_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
}

// Householder reduction to tridiagonal form. On exit d holds the diagonal and
// e the subdiagonal (e[0] unused); when vectors is set, a is overwritten with
// the accumulated orthogonal transformation.
void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e, bool vectors) {
    const int n = static_cast<int>(a.rows());
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    if (vectors) a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    if (vectors) d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        if (vectors) {
            const int l = i - 1;
            if (d[i] != 0.0) {
                for (int j = 0; j <= l; ++j) {
                    double g = 0.0;
                    for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
                    for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
                }
            }
            d[i] = a(i, i);
            a(i, i) = 1.0;
            for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
        } else {
            d[i] = a(i, i);
        }
    }
}

// Implicit-shift QL on a tridiagonal matrix; z accumulates rotations when
// vectors is set (z must enter holding the tridiagonalizing transform).
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix& z, bool vectors) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    // Deflation threshold grows with a running norm of the tridiagonal matrix,
    // never the local |d| pair alone; a purely local test stalls on
    // nearly-rank-deficient inputs whose tail entries underflow it.
    double norm_scale = 0.0;
    for (int l = 0; l < n; ++l) {
        norm_scale = std::max(norm_scale, std::fabs(d[l]) + std::fabs(e[l]));
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * std::max(dd, norm_scale)) break;
            }
            if (m != l) {
                if (iter++ == 64)
                    throw std::runtime_error("sym_eig: QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (vectors) {
                        for (int k = 0; k < n; ++k) {
                            f = z(k, i + 1);
                            z(k, i + 1) = s * z(k, i) + c * f;
                            z(k, i) = c * z(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void sort_descending(SymEig& eig, bool vectors) {
    const std::size_t n = eig.eigenvalues.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return eig.eigenvalues[a] > eig.eigenvalues[b];
    });
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = eig.eigenvalues[order[i]];
    if (vectors) {
        Matrix sorted(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) sorted(i, j) = eig.eigenvectors(i, order[j]);
        eig.eigenvectors = std::move(sorted);
    }
    eig.eigenvalues = std::move(values);
}

}  // namespace

SymEig sym_eig(const Matrix& a, bool vectors) {
    check_square(a, "sym_eig");
    const std::size_t n = a.rows();
    Matrix work = a;
    std::vector<double> d(n, 0.0), e(n, 0.0);
    tridiagonalize(work, d, e, vectors);
    ql_implicit(d, e, work, vectors);
    SymEig eig;
    eig.eigenvalues = std::move(d);
    if (vectors) eig.eigenvectors = std::move(work);
    sort_descending(eig, vectors);
    return eig;
}

SymEig sym_eig_jacobi(const Matrix& a, bool vectors) {
    check_square(a, "sym_eig_jacobi");
    const int n = static_cast<int>(a.rows());
    Matrix w = a;
    Matrix v = vectors ? Matrix::identity(a.rows()) : Matrix();
    const double target = 1e-12 * std::max(1.0, frobenius_norm(a));
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += 2.0 * w(p, q) * w(p, q);
        if (std::sqrt(off) <= target) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (apq == 0.0) continue;
                const double diff = w(q, q) - w(p, p);
                double t;
                if (std::fabs(diff) + 100.0 * std::fabs(apq) == std::fabs(diff)) {
                    t = apq / diff;
                } else {
                    const double theta = 0.5 * diff / apq;
                    t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                w(p, p) -= t * apq;
                w(q, q) += t * apq;
                w(p, q) = w(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double grp = w(r, p), grq = w(r, q);
                    w(r, p) = w(p, r) = grp - s * (grq + grp * tau);
                    w(r, q) = w(q, r) = grq + s * (grp - grq * tau);
                }
                if (vectors) {
                    for (int r = 0; r < n; ++r) {
                        const double vrp = v(r, p), vrq = v(r, q);
                        v(r, p) = vrp - s * (vrq + vrp * tau);
                        v(r, q) = vrq + s * (vrp - vrq * tau);
                    }
                }
            }
        }
    }

    SymEig eig;
    eig.eigenvalues.resize(a.rows());
    for (int i = 0; i < n; ++i) eig.eigenvalues[static_cast<std::size_t>(i)] = w(i, i);
    if (vectors) eig.eigenvectors = std::move(v);
    sort_descending(eig, vectors);
    return eig;
}

Matrix spectral_apply(const SymEig& eig, const std::function<double(double)>& f) {
    std::vector<double> mapped(eig.eigenvalues.size());
    for (std::size_t i = 0; i < mapped.size(); ++i) mapped[i] = f(eig.eigenvalues[i]);
    return matmul(scale_columns(eig.eigenvectors, mapped), transpose(eig.eigenvectors));
}

Matrix PsdFactor::reconstruct() const {
    return matmul(scale_columns(eigenvectors, eigenvalues), transpose(eigenvectors));
}

Matrix PsdFactor::sqrt_matrix() const {
    std::vector<double> roots(eigenvalues.size());
    for (std::size_t i = 0; i < roots.size(); ++i) roots[i] = std::sqrt(eigenvalues[i]);
    return matmul(scale_columns(eigenvectors, roots), transpose(eigenvectors));
}

PsdFactor psd_factor(const Matrix& k) {
    SymEig eig = sym_eig(k, true);
    for (double& v : eig.eigenvalues) v = std::max(v, 0.0);
    return PsdFactor{std::move(eig.eigenvectors), std::move(eig.eigenvalues)};
}

}  // namespace qkband
