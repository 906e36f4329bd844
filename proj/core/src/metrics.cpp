#include "qkband/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "qkband/linalg.hpp"

namespace qkband {

namespace {

void check_square_min2(const Matrix& k, const char* what) {
    if (k.rows() != k.cols()) throw std::invalid_argument(std::string(what) + ": matrix not square");
    if (k.rows() < 2) throw std::invalid_argument(std::string(what) + ": need N >= 2");
}

double max_asymmetry(const Matrix& k) {
    double worst = 0.0;
    for (std::size_t i = 0; i < k.rows(); ++i)
        for (std::size_t j = i + 1; j < k.cols(); ++j)
            worst = std::max(worst, std::fabs(k(i, j) - k(j, i)));
    return worst;
}

Matrix trace_normalized(const Matrix& k, const char* what) {
    const double t = trace(k);
    if (!(t > 0.0)) throw std::invalid_argument(std::string(what) + ": trace must be positive");
    const double scale = static_cast<double>(k.rows()) / t;
    Matrix out = k;
    for (double& v : out.data()) v *= scale;
    return out;
}

}  // namespace

double gram_variance(const Matrix& k, VarianceConvention convention) {
    check_square_min2(k, "gram_variance");
    const std::size_t n = k.rows();
    const double total = static_cast<double>(n) * static_cast<double>(n);
    double sum = 0.0, sum_sq = 0.0;
    for (double v : k.data()) {
        sum += v;
        sum_sq += v * v;
    }
    const double mu = sum / total;
    if (convention == VarianceConvention::PopulationAllEntries) return sum_sq / total - mu * mu;

    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = k(i, j) - mu;
            acc += d * d;
        }
    return acc / static_cast<double>(n);
}

double mean_entry(const Matrix& k) {
    double sum = 0.0;
    for (double v : k.data()) sum += v;
    return sum / static_cast<double>(k.data().size());
}

double mean_sq_entry(const Matrix& k) {
    double sum = 0.0;
    for (double v : k.data()) sum += v * v;
    return sum / static_cast<double>(k.data().size());
}

std::vector<double> spectrum(const Matrix& k) {
    check_square_min2(k, "spectrum");
    if (max_asymmetry(k) > 1e-8)
        throw std::invalid_argument("spectrum: matrix asymmetry exceeds 1e-8");
    Matrix scaled = k;
    const double inv_n = 1.0 / static_cast<double>(k.rows());
    for (double& v : scaled.data()) v *= inv_n;
    // Symmetrize rounding noise so the eigensolver sees an exactly symmetric input.
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t j = i + 1; j < scaled.cols(); ++j)
            scaled(i, j) = scaled(j, i) = 0.5 * (scaled(i, j) + scaled(j, i));
    return sym_eig(scaled, false).eigenvalues;
}

double haar_moment_constant(int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("haar_moment_constant: n_qubits must be >= 1");
    const double dim = std::ldexp(1.0, n_qubits);  // 2^n
    return 2.0 / (dim * (dim + 1.0));
}

double expressivity_sq(const Matrix& k_fqk, int n_qubits) {
    check_square_min2(k_fqk, "expressivity_sq");
    return mean_sq_entry(k_fqk) - haar_moment_constant(n_qubits);
}

double geometric_difference(const Matrix& k_c, const Matrix& k_q, double lambda) {
    check_square_min2(k_c, "geometric_difference");
    check_square_min2(k_q, "geometric_difference");
    if (k_c.rows() != k_q.rows())
        throw std::invalid_argument("geometric_difference: size mismatch");
    if (lambda < 0.0) throw std::invalid_argument("geometric_difference: lambda must be >= 0");

    const Matrix kc = trace_normalized(k_c, "geometric_difference");
    const Matrix kq = trace_normalized(k_q, "geometric_difference");

    PsdFactor fq = psd_factor(kq);
    const double eta_top = fq.eigenvalues.front();
    if (lambda == 0.0 && (eta_top <= 0.0 || fq.min_eigenvalue() <= 1e-12 * eta_top))
        throw std::invalid_argument(
            "geometric_difference: K_q is singular at lambda=0; pass a positive lambda "
            "(the sweep uses lambda = 1/(2C))");

    // sqrt(K_q) (K_q + lambda I)^-2 sqrt(K_q) collapses to a single spectral
    // function of K_q.
    std::vector<double> mid_values(fq.eigenvalues.size());
    for (std::size_t i = 0; i < mid_values.size(); ++i) {
        const double eta = fq.eigenvalues[i];
        const double denom = eta + lambda;
        mid_values[i] = eta / (denom * denom);
    }
    const Matrix mid = matmul(scale_columns(fq.eigenvectors, mid_values),
                              transpose(fq.eigenvectors));

    const Matrix sqrt_c = psd_factor(kc).sqrt_matrix();
    Matrix m = matmul(sqrt_c, matmul(mid, sqrt_c));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            m(i, j) = m(j, i) = 0.5 * (m(i, j) + m(j, i));

    const SymEig em = sym_eig(m, false);
    const double norm_inf = std::max(std::fabs(em.eigenvalues.front()),
                                     std::fabs(em.eigenvalues.back()));
    return std::sqrt(norm_inf);
}

GeometricDifference::GeometricDifference(const Matrix& k_c, const Matrix& k_q) {
    check_square_min2(k_c, "GeometricDifference");
    check_square_min2(k_q, "GeometricDifference");
    if (k_c.rows() != k_q.rows())
        throw std::invalid_argument("GeometricDifference: size mismatch");
    const Matrix kc = trace_normalized(k_c, "GeometricDifference");
    const Matrix kq = trace_normalized(k_q, "GeometricDifference");
    PsdFactor fq = psd_factor(kq);
    eta_q_ = fq.eigenvalues;
    a_ = matmul(psd_factor(kc).sqrt_matrix(), fq.eigenvectors);
    a_t_ = transpose(a_);
}

double GeometricDifference::at(double lambda) const {
    if (lambda < 0.0) throw std::invalid_argument("GeometricDifference: lambda must be >= 0");
    const double eta_top = eta_q_.front();
    if (lambda == 0.0 && (eta_top <= 0.0 || eta_q_.back() <= 1e-12 * eta_top))
        throw std::invalid_argument(
            "GeometricDifference: K_q is singular at lambda=0; pass a positive lambda "
            "(the sweep uses lambda = 1/(2C))");
    std::vector<double> mid(eta_q_.size());
    for (std::size_t i = 0; i < mid.size(); ++i) {
        const double denom = eta_q_[i] + lambda;
        mid[i] = eta_q_[i] / (denom * denom);
    }
    Matrix m = matmul(scale_columns(a_, mid), a_t_);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            m(i, j) = m(j, i) = 0.5 * (m(i, j) + m(j, i));
    const SymEig em = sym_eig(m, false);
    return std::sqrt(std::max(std::fabs(em.eigenvalues.front()),
                              std::fabs(em.eigenvalues.back())));
}

double frobenius_distance(const Matrix& k_c, const Matrix& k_q) {
    if (k_c.rows() != k_q.rows() || k_c.cols() != k_q.cols())
        throw std::invalid_argument("frobenius_distance: shape mismatch");
    const double denom = frobenius_norm(k_q);
    if (denom == 0.0)
        throw std::invalid_argument("frobenius_distance: reference matrix is all-zero");
    double diff = 0.0;
    for (std::size_t i = 0; i < k_c.data().size(); ++i) {
        const double d = k_c.data()[i] - k_q.data()[i];
        diff += d * d;
    }
    return std::sqrt(diff) / denom;
}

MetricReport compute_metrics(const Matrix& k, std::optional<int> n_qubits_for_expressivity) {
    MetricReport r;
    r.n_samples = k.rows();
    r.variance_population = gram_variance(k, VarianceConvention::PopulationAllEntries);
    r.variance_off_diagonal = gram_variance(k, VarianceConvention::OffDiagonalEq4);
    r.mean = mean_entry(k);
    r.mean_sq = mean_sq_entry(k);
    r.eigenvalues = spectrum(k);
    r.eta_max = r.eigenvalues.front();
    r.expressivity_sq = n_qubits_for_expressivity
                            ? expressivity_sq(k, *n_qubits_for_expressivity)
                            : std::numeric_limits<double>::quiet_NaN();
    return r;
}

std::string metric_report_to_json(const MetricReport& report) {
    char buf[40];
    auto num = [&buf](double v) -> std::string {
        if (std::isnan(v)) return "null";
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    };
    std::string out = "{";
    out += "\"n_samples\":" + std::to_string(report.n_samples);
    out += ",\"variance_population\":" + num(report.variance_population);
    out += ",\"variance_off_diagonal\":" + num(report.variance_off_diagonal);
    out += ",\"mean\":" + num(report.mean);
    out += ",\"mean_sq\":" + num(report.mean_sq);
    out += ",\"eta_max\":" + num(report.eta_max);
    out += ",\"expressivity_sq\":" + num(report.expressivity_sq);
    out += ",\"eigenvalues\":[";
    for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
        if (i) out += ",";
        out += num(report.eigenvalues[i]);
    }
    out += "]}";
    return out;
}

}  // namespace qkband
