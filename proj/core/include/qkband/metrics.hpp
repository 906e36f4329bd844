#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qkband/matrix.hpp"

namespace qkband {

/// Two variance conventions are deliberately kept side by side: the printed
/// per-dataset formula divides the off-diagonal sum by N, while the analytic
/// reference model uses the plain population variance over all N^2 entries
/// (diagonal included). Population is the default for model comparisons.
enum class VarianceConvention { OffDiagonalEq4, PopulationAllEntries };

double gram_variance(const Matrix& k, VarianceConvention convention);

double mean_entry(const Matrix& k);
double mean_sq_entry(const Matrix& k);

/// Eigenvalues of K/N, descending. Rejects matrices whose asymmetry exceeds
/// 1e-8.
std::vector<double> spectrum(const Matrix& k);

/// 2-design moment constant 2!(2^n-1)!/(2+2^n-1)!, evaluated as
/// 2/(2^n (2^n+1)) so no factorial overflows.
double haar_moment_constant(int n_qubits);

/// Squared expressivity of the encoding ensemble behind a fidelity-kernel
/// Gram matrix: mean of the squared entries minus the 2-design constant.
double expressivity_sq(const Matrix& k_fqk, int n_qubits);

/// Asymmetric spectral distance between a classical and a quantum Gram
/// matrix. Both inputs are trace-normalized to N internally; negative
/// eigenvalues are clamped to zero before the square roots and the
/// regularized inverse square. lambda = 0 demands an invertible k_q.
double geometric_difference(const Matrix& k_c, const Matrix& k_q, double lambda);

/// ||K_c - K_q||_F / ||K_q||_F.
double frobenius_distance(const Matrix& k_c, const Matrix& k_q);

/// Factored form of geometric_difference for evaluating one matrix pair at
/// many lambda values (the sweep needs one g per regularization setting).
/// Agrees with geometric_difference(k_c, k_q, lambda) to rounding.
class GeometricDifference {
public:
    GeometricDifference(const Matrix& k_c, const Matrix& k_q);
    double at(double lambda) const;

private:
    std::vector<double> eta_q_;  // clamped spectrum of the normalized k_q
    Matrix a_;                   // sqrt(k_c normalized) * Q_q
    Matrix a_t_;
};

/// All per-Gram diagnostics for one (kernel, bandwidth) cell.
struct MetricReport {
    double variance_population = 0.0;
    double variance_off_diagonal = 0.0;
    double mean = 0.0;
    double mean_sq = 0.0;
    double eta_max = 0.0;
    double expressivity_sq = 0.0;  // NaN for kernels without an encoding circuit
    std::vector<double> eigenvalues;  // of K/N, descending
    std::size_t n_samples = 0;
};

/// Computes every MetricReport field from one Gram matrix. Pass the qubit
/// count to get the expressivity of a fidelity kernel; omit it for kernels
/// where expressivity is undefined.
MetricReport compute_metrics(const Matrix& k, std::optional<int> n_qubits_for_expressivity);

std::string metric_report_to_json(const MetricReport& report);

}  // namespace qkband
