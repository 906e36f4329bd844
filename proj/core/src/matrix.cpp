#include "qkband/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace qkband {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    Matrix c(a.rows(), b.cols(), 0.0);
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    // i-k-j order keeps the inner loop contiguous in both b and c.
    for (std::size_t i = 0; i < n; ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = ai[p];
            if (aip == 0.0) continue;
            const double* bp = b.row(p);
            for (std::size_t j = 0; j < m; ++j) ci[j] += aip * bp[j];
        }
    }
    return c;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

Matrix scale_columns(const Matrix& a, const std::vector<double>& d) {
    if (d.size() != a.cols()) throw std::invalid_argument("scale_columns: size mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* r = out.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) r[j] *= d[j];
    }
    return out;
}

double trace(const Matrix& m) {
    double t = 0.0;
    const std::size_t n = m.rows() < m.cols() ? m.rows() : m.cols();
    for (std::size_t i = 0; i < n; ++i) t += m(i, i);
    return t;
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double v : m.data()) best = std::max(best, std::fabs(v));
    return best;
}

}  // namespace qkband
