#include <cmath>
#include <numeric>

#include "doctest.h"
#include "semidiscrete/poisson.hpp"

using namespace semidiscrete;

TEST_CASE("Poisson weights against the direct formula") {
    for (double lambda : {0.0, 0.3, 1.0, 7.5, 40.0}) {
        const auto w = poisson_weights(lambda, 60);
        for (std::size_t j = 0; j <= 60; ++j) {
            const double direct = lambda == 0.0 ? (j == 0 ? 1.0 : 0.0)
                                                : std::exp(j * std::log(lambda) - lambda - std::lgamma(j + 1.0));
            CHECK(std::abs(w[j] - direct) <= 1e-13 * std::max(direct, 1e-300));
        }
    }
}

TEST_CASE("large rates stay normalized") {
    const auto w = poisson_weights(2000.0, 3000);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("extent bounds the discarded tail") {
    for (double lambda : {0.01, 1.0, 12.0, 300.0}) {
        for (double tol : {1e-6, 1e-12, 1e-15}) {
            const auto e = poisson_extent(lambda, tol);
            CHECK(e.tail_bound <= tol);
            CHECK(poisson_upper_tail(lambda, e.j_max) <= e.tail_bound * (1 + 1e-9));
        }
    }
    CHECK(poisson_extent(0.0, 1e-12).j_max == 0);
}

TEST_CASE("upper tail against one minus the head") {
    const double lambda = 3.0;
    const auto w = poisson_weights(lambda, 10);
    double head = 0.0;
    for (std::size_t j = 0; j <= 10; ++j) {
        head += w[j];
        CHECK(poisson_upper_tail(lambda, j) == doctest::Approx(1.0 - head).epsilon(1e-10));
    }
    CHECK(poisson_upper_tail(50.0, 5) == doctest::Approx(1.0).epsilon(1e-15));
}
