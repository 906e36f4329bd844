#include "qkband/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qkband/dataset.hpp"
#include "qkband/kernels.hpp"
#include "qkband/metrics.hpp"
#include "qkband/parallel.hpp"

namespace qkband {

namespace {

constexpr double kPi = std::numbers::pi;

void check_params(const AnalyticParams& p) {
    if (p.dimension < 1) throw std::invalid_argument("analytic model: dimension must be >= 1");
    if (p.layers < 1) throw std::invalid_argument("analytic model: layers must be >= 1");
    if (!(p.bandwidth > 0.0)) throw std::invalid_argument("analytic model: bandwidth must be > 0");
}

}  // namespace

double sinc(double z) {
    if (std::fabs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

// The raw integrals contain cos(2 pi u)/u^2 differences that cancel
// catastrophically near u = 0; rewriting via half-angle identities turns both
// moments into polynomials in sinc(pi u) and sinc(2 pi u), stable everywhere.
double kernel_mean_factor(double lc) {
    const double s1 = sinc(kPi * lc);
    return 0.5 + 0.5 * s1 * s1;
}

double kernel_second_moment_factor(double lc) {
    const double s1 = sinc(kPi * lc);
    const double s2 = sinc(2.0 * kPi * lc);
    return 3.0 / 8.0 + 0.5 * s1 * s1 + 0.125 * s2 * s2;
}

double var_uniform_lc(int dimension, double lc) {
    const double ek = kernel_mean_factor(lc);
    const double ek2 = kernel_second_moment_factor(lc);
    return std::pow(ek2, dimension) - std::pow(ek, 2 * dimension);
}

double var_uniform(const AnalyticParams& p) {
    check_params(p);
    return var_uniform_lc(p.dimension, static_cast<double>(p.layers) * p.bandwidth);
}

double var_limit_small_c(const AnalyticParams& p) {
    check_params(p);
    const double lc = static_cast<double>(p.layers) * p.bandwidth;
    const double alpha = 7.0 * std::pow(kPi, 4) / 180.0 * static_cast<double>(p.dimension);
    return alpha * std::pow(lc, 4);
}

double var_limit_large_c(int dimension) {
    if (dimension < 1) throw std::invalid_argument("var_limit_large_c: dimension must be >= 1");
    // (a^n - b^n)/d^n with a=48, b=32, d=128, evaluated as ratio powers so
    // large n cannot overflow.
    return std::pow(48.0 / 128.0, dimension) - std::pow(32.0 / 128.0, dimension);
}

OperatorEigenvalues operator_eigenvalues(double lc) {
    if (lc < 0.0) throw std::invalid_argument("operator_eigenvalues: L*c must be >= 0");
    const double s1 = sinc(kPi * lc);
    const double s2 = sinc(2.0 * kPi * lc);
    const double root = std::sqrt((1.0 - s2) * (1.0 - s2) + 16.0 * s1 * s1);
    OperatorEigenvalues ev;
    ev.lambda1 = 3.0 / 8.0 + s2 / 8.0 + root / 8.0;
    ev.lambda2 = 0.25 - 0.25 * s2;
    ev.lambda3 = 3.0 / 8.0 + s2 / 8.0 - root / 8.0;
    ev.lambda4 = 0.0;
    return ev;
}

double eta_max_analytic(const AnalyticParams& p) {
    check_params(p);
    const double lc = static_cast<double>(p.layers) * p.bandwidth;
    return std::pow(operator_eigenvalues(lc).lambda1, p.dimension);
}

double expressivity_expectation(const AnalyticParams& p) {
    check_params(p);
    const double lc = static_cast<double>(p.layers) * p.bandwidth;
    return std::pow(kernel_second_moment_factor(lc), p.dimension);
}

double peak_bandwidth(int dimension, int layers) {
    if (dimension < 1 || layers < 1)
        throw std::invalid_argument("peak_bandwidth: dimension and layers must be >= 1");
    // Coarse log-spaced scan localizes the single interior peak, golden
    // section refines inside the bracketing nodes. The scan runs over
    // u = L*c so the peak location in u is independent of L.
    const double lo = std::log(1e-3), hi = std::log(std::pow(10.0, 1.5));
    constexpr int kScan = 2000;
    double best_u = 0.0, best_v = -1.0;
    int best_i = 0;
    for (int i = 0; i <= kScan; ++i) {
        const double u = std::exp(lo + (hi - lo) * i / kScan);
        const double v = var_uniform_lc(dimension, u);
        if (v > best_v) {
            best_v = v;
            best_u = u;
            best_i = i;
        }
    }
    double a = std::exp(lo + (hi - lo) * std::max(best_i - 1, 0) / kScan);
    double b = std::exp(lo + (hi - lo) * std::min(best_i + 1, kScan) / kScan);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = var_uniform_lc(dimension, x1), f2 = var_uniform_lc(dimension, x2);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * best_u; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = var_uniform_lc(dimension, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = var_uniform_lc(dimension, x1);
        }
    }
    const double u_star = 0.5 * (a + b);
    return u_star / static_cast<double>(layers);
}

McMetrics monte_carlo_check(const AnalyticParams& p, std::size_t n_samples, std::uint64_t seed) {
    check_params(p);
    if (n_samples < 2) throw std::invalid_argument("monte_carlo_check: need at least 2 samples");

    const Dataset sample = synth_uniform(n_samples, p.dimension, seed);
    const Matrix& x = sample.features;
    const int n = p.dimension;
    const double c = p.bandwidth;
    const int layers = p.layers;

    Matrix k(n_samples, n_samples, 0.0);
    parallel_for(0, n_samples, [&](std::size_t i) {
        std::vector<double> xi(x.row(i), x.row(i) + n);
        for (double& v : xi) v *= c;
        std::vector<double> xj(n);
        for (std::size_t j = i + 1; j < n_samples; ++j) {
            for (int f = 0; f < n; ++f) xj[static_cast<std::size_t>(f)] = c * x(j, f);
            k(i, j) = k_sep_rx_analytic(n, layers, xi, xj);
        }
    });
    for (std::size_t i = 0; i < n_samples; ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n_samples; ++j) k(j, i) = k(i, j);
    }

    McMetrics out;
    out.variance = gram_variance(k, VarianceConvention::PopulationAllEntries);
    out.eta_max = spectrum(k).front();
    out.mean_sq = mean_sq_entry(k);
    out.expressivity_sq = out.mean_sq - haar_moment_constant(n);
    return out;
}

}  // namespace qkband
