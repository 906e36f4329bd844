#include <doctest.h>

#include <cmath>

#include "qkband/kernels.hpp"
#include "qkband/rng.hpp"
#include "qkband/svm.hpp"
#include "oracles.hpp"

using namespace qkband;

namespace {

LabeledSet rbf_problem(std::size_t n, std::uint64_t seed, double bandwidth = 1.0) {
    Matrix data(n, 2);
    Rng rng(seed);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        data(i, 0) = rng.uniform(-1.5, 1.5);
        data(i, 1) = rng.uniform(-1.5, 1.5);
        labels[i] = rng.uniform() < 0.5 ? -1 : 1;
    }
    bool pos = false, neg = false;
    for (int y : labels) (y > 0 ? pos : neg) = true;
    if (!pos) labels[0] = 1;
    if (!neg) labels[1] = -1;
    KernelSpec spec;
    spec.kind = KernelKind::RBF;
    spec.bandwidth = bandwidth;
    return LabeledSet{gram(spec, data).values, labels};
}

}  // namespace

TEST_CASE("two orthogonal points saturate at alpha = 1 with zero bias") {
    LabeledSet train{Matrix::identity(2), {1, -1}};
    const SvmModel model = svm_fit(train, 1.0);
    CHECK(model.converged);
    CHECK(model.dual_coef[0] == doctest::Approx(1.0));
    CHECK(model.dual_coef[1] == doctest::Approx(-1.0));
    CHECK(model.bias == doctest::Approx(0.0));
    const std::vector<double> f = decision_values(model, Matrix::identity(2));
    CHECK(f[0] > 0.0);
    CHECK(f[1] < 0.0);
    CHECK(model.objective == doctest::Approx(testing::svm_dual_objective(
                                 train.gram, train.labels, {1.0, 1.0})));
}

TEST_CASE("XOR with an RBF kernel trains to full accuracy") {
    Matrix data(4, 2, 0.0);
    data(1, 0) = data(1, 1) = 1.0;
    data(2, 0) = 1.0;
    data(3, 1) = 1.0;
    const std::vector<int> labels{-1, -1, 1, 1};
    KernelSpec spec;
    spec.kind = KernelKind::RBF;
    spec.bandwidth = 1.0;
    const GramMatrix k = gram(spec, data);
    const SvmModel model = svm_fit(LabeledSet{k.values, labels}, 64.0);
    CHECK(model.converged);
    const std::vector<double> f = decision_values(model, k.values);
    for (std::size_t i = 0; i < 4; ++i) CHECK(f[i] * labels[i] > 0.0);
}

TEST_CASE("free support vectors sit on the margin") {
    const LabeledSet train = rbf_problem(40, 7);
    const SvmModel model = svm_fit(train, 10.0);
    REQUIRE(model.converged);
    const std::vector<double> f = decision_values(model, train.gram);
    for (int idx : model.support_indices) {
        const double alpha = std::fabs(model.dual_coef[static_cast<std::size_t>(idx)]);
        if (alpha > 1e-9 && alpha < 10.0 - 1e-9)
            CHECK(std::fabs(train.labels[static_cast<std::size_t>(idx)] *
                                f[static_cast<std::size_t>(idx)] -
                            1.0) < 1e-3);
    }
}

TEST_CASE("duplicated training rows leave the decision function unchanged") {
    const LabeledSet base = rbf_problem(20, 13);
    LabeledSet doubled;
    const std::size_t n = base.gram.rows();
    doubled.gram = Matrix(n + 1, n + 1);
    doubled.labels = base.labels;
    doubled.labels.push_back(base.labels[0]);
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j)
            doubled.gram(i, j) = base.gram(i == n ? 0 : i, j == n ? 0 : j);

    const SvmModel a = svm_fit(base, 4.0, 1e-10, 2000000);
    const SvmModel b = svm_fit(doubled, 4.0, 1e-10, 2000000);
    // Evaluate both decision functions on the original rows.
    Matrix cross(n, n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= n; ++j) cross(i, j) = base.gram(i, j == n ? 0 : j);
    const std::vector<double> fa = decision_values(a, base.gram);
    const std::vector<double> fb = decision_values(b, cross);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(fa[i] - fb[i]) < 1e-6);
}

TEST_CASE("validation and the non-convergence flag") {
    CHECK_THROWS_AS(svm_fit(LabeledSet{Matrix::identity(3), {1, 1, 1}}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(svm_fit(LabeledSet{Matrix::identity(2), {1, 0}}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(svm_fit(LabeledSet{Matrix::identity(2), {1, -1}}, -2.0),
                    std::invalid_argument);
    const LabeledSet hard = rbf_problem(60, 99);
    const SvmModel model = svm_fit(hard, 1024.0, 1e-3, 3);
    CHECK_FALSE(model.converged);
    CHECK(model.iterations == 3);
}

TEST_CASE("decision value plumbing") {
    const LabeledSet train = rbf_problem(10, 3);
    const SvmModel model = svm_fit(train, 2.0);
    CHECK(decision_values(model, Matrix(0, 10)).empty());
    const std::vector<double> f = decision_values(model, Matrix(4, 10, 0.0));
    for (double v : f) CHECK(v == doctest::Approx(model.bias));
    CHECK_THROWS_AS(decision_values(model, Matrix(2, 9, 0.0)), std::invalid_argument);
}

TEST_CASE("dual objective matches a projected-gradient oracle on small problems") {
    for (std::uint64_t seed : {101ull, 102ull, 103ull, 104ull}) {
        for (double c : {0.5, 8.0}) {
            const LabeledSet train = rbf_problem(10, seed);
            const SvmModel model = svm_fit(train, c, 1e-8, 500000);
            const double oracle = testing::svm_dual_oracle(train.gram, train.labels, c);
            const double scale = std::max(1.0, std::fabs(oracle));
            CHECK(std::fabs(model.objective - oracle) / scale < 1e-3);
        }
    }
}

TEST_CASE("scaling the gram by s with C/s preserves decision signs") {
    const LabeledSet train = rbf_problem(30, 55);
    const double s = 7.0, c = 8.0;
    LabeledSet scaled = train;
    for (double& v : scaled.gram.data()) v *= s;
    const SvmModel a = svm_fit(train, c, 1e-8, 1000000);
    const SvmModel b = svm_fit(scaled, c / s, 1e-8, 1000000);
    const std::vector<double> fa = decision_values(a, train.gram);
    const std::vector<double> fb = decision_values(b, scaled.gram);
    for (std::size_t i = 0; i < fa.size(); ++i) {
        if (std::fabs(fa[i]) < 1e-6) continue;  // skip points on the boundary
        CHECK(fa[i] * fb[i] > 0.0);
    }
}

TEST_CASE("roc auc") {
    const std::vector<int> labels{-1, -1, 1, 1};
    CHECK(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, labels) == doctest::Approx(1.0));
    CHECK(roc_auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, labels) == doctest::Approx(0.0));
    CHECK(roc_auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, labels) == doctest::Approx(0.5));
    CHECK(roc_auc(std::vector<double>{0.1, 0.8, 0.8, 0.9}, labels) == doctest::Approx(0.875));
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}),
                    std::invalid_argument);

    // Invariance under strictly monotone transforms of the scores.
    Rng rng(77);
    std::vector<double> scores(50);
    std::vector<int> y(50);
    for (std::size_t i = 0; i < 50; ++i) {
        scores[i] = rng.uniform(-3.0, 3.0);
        y[i] = rng.uniform() < 0.4 ? -1 : 1;
    }
    std::vector<double> warped(50);
    for (std::size_t i = 0; i < 50; ++i) warped[i] = std::exp(0.5 * scores[i]) + scores[i];
    CHECK(roc_auc(scores, y) == doctest::Approx(roc_auc(warped, y)));
}
