#pragma once

#include <cstdint>

namespace qkband {

/// Closed-form reference model for the separable-R_X fidelity kernel under
/// data drawn uniformly from [-pi, pi]^n. Every quantity depends on the
/// bandwidth c only through the product L*c.
struct AnalyticParams {
    int dimension = 1;   // n
    int layers = 1;      // L
    double bandwidth = 1.0;  // c > 0
};

/// sin(z)/z with the removable singularity expanded in series below |z| < 1e-4.
double sinc(double z);

/// One-dimensional first and second kernel moments under the uniform density,
/// as functions of u = L*c. The full model raises these to powers of n.
double kernel_mean_factor(double lc);        // E[k] one-coordinate factor
double kernel_second_moment_factor(double lc);  // E[k^2] one-coordinate factor

/// Population variance of the kernel over two independent uniform draws:
/// second_moment^n - mean^(2n).
double var_uniform(const AnalyticParams& p);
double var_uniform_lc(int dimension, double lc);

/// Small-bandwidth law alpha(n) (L c)^4 with alpha(n) = (7 pi^4 / 180) n.
double var_limit_small_c(const AnalyticParams& p);

/// Large-bandwidth plateau (a^n - b^n)/d^n with a=48, b=32, d=128.
double var_limit_large_c(int dimension);

/// Spectrum of the one-qubit kernel integral operator; lambda4 = 0 and the
/// four values sum to 1.
struct OperatorEigenvalues {
    double lambda1, lambda2, lambda3, lambda4;
};
OperatorEigenvalues operator_eigenvalues(double lc);

/// Largest eigenvalue lambda1(L c)^n; 1 as c -> 0 and (1/2)^n as c -> inf.
double eta_max_analytic(const AnalyticParams& p);

/// E[k^2] = second_moment^n; combined with the 2-design constant it gives the
/// squared-expressivity limits.
double expressivity_expectation(const AnalyticParams& p);

/// Bandwidth at which var_uniform peaks, located by a grid scan plus golden
/// section over u = L*c on the fixed window [1e-3, 10^1.5], then mapped back
/// to c. Because the search runs in u, c_p(L) * L is the same number for
/// every L (bit-exact when L is a power of two).
double peak_bandwidth(int dimension, int layers);

/// Discrete counterparts computed from one uniform sample of n_samples
/// points: Gram matrix from the closed-form kernel, then population variance,
/// largest eigenvalue of K/N, squared expressivity, and the mean squared
/// entry it contains.
struct McMetrics {
    double variance;
    double eta_max;
    double expressivity_sq;
    double mean_sq;
};
McMetrics monte_carlo_check(const AnalyticParams& p, std::size_t n_samples, std::uint64_t seed);

}  // namespace qkband
