#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qkband/analytic.hpp"
#include "qkband/sweep.hpp"

using namespace qkband;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sinc handles the removable singularity") {
    CHECK(sinc(0.0) == doctest::Approx(1.0));
    CHECK(sinc(1e-5) == doctest::Approx(1.0 - 1e-10 / 6.0));
    // Continuity across the series/direct switch at |z| = 1e-4.
    CHECK(std::fabs(sinc(1e-4 - 1e-9) - sinc(1e-4 + 1e-9)) < 1e-12);
    CHECK(sinc(kPi) == doctest::Approx(0.0).scale(1));
    CHECK(sinc(1.0) == doctest::Approx(std::sin(1.0)));
}

TEST_CASE("variance closed form and its limits") {
    SUBCASE("n=1 large bandwidth settles at 1/8") {
        CHECK(var_uniform({1, 1, 1e4}) == doctest::Approx(0.125).epsilon(1e-8));
        CHECK(var_limit_large_c(1) == doctest::Approx(0.125));
    }
    SUBCASE("n=4 plateau value") {
        CHECK(var_limit_large_c(4) ==
              doctest::Approx(std::pow(3.0 / 8.0, 4) - std::pow(1.0 / 4.0, 4)));
        CHECK(var_uniform({4, 2, 1e4}) == doctest::Approx(var_limit_large_c(4)).epsilon(1e-6));
    }
    SUBCASE("n=2 plateau arithmetic") {
        CHECK(var_limit_large_c(2) == doctest::Approx((48.0 * 48 - 32.0 * 32) / (128.0 * 128)));
    }
    SUBCASE("small-c power law") {
        const double alpha1 = 7.0 * std::pow(kPi, 4) / 180.0;
        CHECK(var_limit_small_c({1, 1, 1.0}) == doctest::Approx(alpha1));
        CHECK(var_limit_small_c({2, 1, 1.0}) == doctest::Approx(2.0 * alpha1));
        CHECK(var_uniform({1, 1, 1e-3}) == doctest::Approx(3.788e-12).epsilon(1e-3));
        for (double lc : {0.01, 0.003, 0.001}) {
            const AnalyticParams p{3, 1, lc};
            CHECK(var_uniform(p) == doctest::Approx(var_limit_small_c(p)).epsilon(0.01));
        }
    }
    SUBCASE("plateau decreases monotonically to zero in n") {
        double prev = var_limit_large_c(1);
        for (int n = 2; n <= 40; ++n) {
            const double cur = var_limit_large_c(n);
            CHECK(cur < prev);
            prev = cur;
        }
        CHECK(var_limit_large_c(40) < 1e-10);
    }
    SUBCASE("non-negative over the tested domain") {
        for (int n = 1; n <= 8; ++n)
            for (double lc = 1e-3; lc <= 300.0; lc *= 1.45)
                CHECK(var_uniform_lc(n, lc) >= 0.0);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(var_uniform({0, 1, 1.0}), std::invalid_argument);
        CHECK_THROWS_AS(var_uniform({1, 0, 1.0}), std::invalid_argument);
        CHECK_THROWS_AS(var_uniform({1, 1, 0.0}), std::invalid_argument);
    }
}

TEST_CASE("operator eigenvalues") {
    SUBCASE("unit trace identically") {
        for (double lc : {1e-9, 0.7, 3.3, 50.0}) {
            const OperatorEigenvalues ev = operator_eigenvalues(lc);
            CHECK(ev.lambda1 + ev.lambda2 + ev.lambda3 + ev.lambda4 ==
                  doctest::Approx(1.0).epsilon(1e-12));
            CHECK(ev.lambda1 >= ev.lambda3);
            CHECK(ev.lambda4 == 0.0);
        }
    }
    SUBCASE("small-bandwidth limit (1, 0, 0, 0)") {
        const OperatorEigenvalues ev = operator_eigenvalues(1e-9);
        CHECK(ev.lambda1 == doctest::Approx(1.0));
        CHECK(ev.lambda2 == doctest::Approx(0.0).scale(1));
        CHECK(ev.lambda3 == doctest::Approx(0.0).scale(1));
    }
    SUBCASE("large-bandwidth limit (1/2, 1/4, 1/4, 0)") {
        const OperatorEigenvalues ev = operator_eigenvalues(1e6);
        CHECK(ev.lambda1 == doctest::Approx(0.5).epsilon(1e-5));
        CHECK(ev.lambda2 == doctest::Approx(0.25).epsilon(1e-5));
        CHECK(ev.lambda3 == doctest::Approx(0.25).epsilon(1e-5));
    }
}

TEST_CASE("largest analytic eigenvalue") {
    CHECK(eta_max_analytic({4, 2, 1e-6}) == doctest::Approx(1.0));
    CHECK(eta_max_analytic({4, 2, 1e5}) == doctest::Approx(1.0 / 16.0).epsilon(1e-4));
    CHECK(eta_max_analytic({1, 2, 0.37}) ==
          doctest::Approx(operator_eigenvalues(0.74).lambda1));
}

TEST_CASE("largest analytic eigenvalue decays along the grid up to sinc ripple") {
    // The closed form carries a damped oscillation of magnitude O(1/(L c)),
    // so strict monotonicity fails by up to ~2e-2; the decay holds to that
    // tolerance.
    for (int n : {1, 2, 4}) {
        double prev = 10.0;
        for (double c : default_bandwidth_grid()) {
            const double eta = eta_max_analytic({n, 2, c});
            CHECK(eta <= prev + 0.02);
            prev = eta;
        }
    }
}

TEST_CASE("second-moment expectation") {
    CHECK(expressivity_expectation({1, 1, 1e5}) == doctest::Approx(3.0 / 8.0).epsilon(1e-6));
    CHECK(expressivity_expectation({1, 1, 1e-6}) == doctest::Approx(1.0));
    CHECK(expressivity_expectation({4, 1, 10.0}) ==
          doctest::Approx(std::pow(3.0 / 8.0, 4)).epsilon(1e-3));
}

TEST_CASE("variance has a single interior peak on the log grid") {
    const std::vector<double> grid = default_bandwidth_grid();
    for (int n : {1, 4}) {
        std::size_t argmax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = var_uniform({n, 2, grid[i]});
            if (v > best) {
                best = v;
                argmax = i;
            }
        }
        CHECK(argmax > 0);
        CHECK(argmax < grid.size() - 1);
    }
}

TEST_CASE("peak bandwidth scales exactly as 1/L") {
    const double base = peak_bandwidth(4, 1);
    for (int layers : {2, 4, 8, 16}) {
        const double cp = peak_bandwidth(4, layers);
        CHECK(cp * static_cast<double>(layers) == base);  // bit-exact for powers of two
    }
    // And the peak is a genuine local maximum of the closed form.
    const double v0 = var_uniform({4, 1, base});
    CHECK(v0 > var_uniform({4, 1, base * 1.01}));
    CHECK(v0 > var_uniform({4, 1, base * 0.99}));
}

TEST_CASE("monte carlo draws approach the closed form") {
    SUBCASE("mid-grid agreement at n=1") {
        const AnalyticParams p{1, 2, 0.3};
        const McMetrics mc = monte_carlo_check(p, 400, 5);
        CHECK(std::fabs(mc.variance - var_uniform(p)) / var_uniform(p) < 0.10);
        CHECK(std::fabs(mc.eta_max - eta_max_analytic(p)) / eta_max_analytic(p) < 0.05);
    }
    SUBCASE("tiny samples overshoot the plateau") {
        const AnalyticParams p{4, 2, std::pow(10.0, 1.5)};
        const McMetrics small = monte_carlo_check(p, 10, 3);
        CHECK(small.variance > var_limit_large_c(4));
    }
    SUBCASE("variance vanishes as c -> 0") {
        const McMetrics mc = monte_carlo_check({1, 2, 1e-3}, 64, 8);
        CHECK(mc.variance < 1e-8);
    }
    SUBCASE("determinism per seed") {
        const AnalyticParams p{2, 2, 0.5};
        const McMetrics a = monte_carlo_check(p, 50, 123);
        const McMetrics b = monte_carlo_check(p, 50, 123);
        CHECK(a.variance == b.variance);
        CHECK(a.eta_max == b.eta_max);
    }
}
