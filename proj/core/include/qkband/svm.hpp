#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qkband/matrix.hpp"

namespace qkband {

/// Precomputed-kernel training set: the train x train Gram matrix plus
/// labels in {-1, +1}.
struct LabeledSet {
    Matrix gram;
    std::vector<int> labels;
};

/// Dual solution of the soft-margin SVM. dual_coef holds alpha_i * y_i for
/// every training point (zero off the support); the decision function is
/// f(x) = sum_i dual_coef[i] k(x, x_i) + bias.
struct SvmModel {
    std::vector<double> dual_coef;
    std::vector<int> support_indices;
    double bias = 0.0;
    double C = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double objective = 0.0;  // dual objective at the returned coefficients
};

/// Sequential minimal optimization with second-order working-set selection.
/// Stops when the maximal KKT violation drops below tol or after max_iter
/// pair updates (the model then carries converged = false). Indefinite Gram
/// matrices are handled by clamping non-positive pair curvature to a small
/// positive value. Iteration order is deterministic, so identical inputs
/// give bit-identical models.
SvmModel svm_fit(const LabeledSet& train, double C, double tol = 1e-3,
                 std::size_t max_iter = 100000);

/// f(x) for each row of a test x train kernel matrix.
std::vector<double> decision_values(const SvmModel& model, const Matrix& cross_gram);

/// Rank-based ROC-AUC; ties contribute 1/2. Needs both classes present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace qkband
