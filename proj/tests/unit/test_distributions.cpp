#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "semidiscrete/distributions.hpp"
#include "semidiscrete/errors.hpp"
#include "semidiscrete/time_scale.hpp"

using namespace semidiscrete;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an exception");
    return Errc::kInvalidArgument;
}

}  // namespace

TEST_CASE("Poisson pmf") {
    const auto zero = poisson_pmf(0.0, 5);
    CHECK(zero.entries[0].weight == 1.0);
    CHECK(zero.entries[3].weight == 0.0);
    CHECK(poisson_pmf(1.0, 3).entries[0].weight == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(std::abs(poisson_pmf(2.0, 40).total - 1.0) <= 1e-12);
}

TEST_CASE("Erlang density") {
    CHECK(erlang_density(1.0, 0, 0.0) == 1.0);
    CHECK(erlang_density(2.0, 0, 1.0) == doctest::Approx(2.0 * std::exp(-2.0)));
    const auto ts = TimeScale::interval(40.0);
    for (std::size_t x : {0u, 1u, 3u}) {
        const double integral = delta_integral(ts, [x](double t) { return erlang_density(1.0, x, t); }, 0.0, 40.0, 1e-12);
        CHECK(std::abs(integral - 1.0) <= 1e-10);
    }
    const double h = 1e-4;
    CHECK(erlang_density(1.0, 1, 1.0) > erlang_density(1.0, 1, 1.0 - h));
    CHECK(erlang_density(1.0, 1, 1.0) > erlang_density(1.0, 1, 1.0 + h));
}

TEST_CASE("binomial and negative binomial") {
    CHECK(binomial_pmf(2, 0.25).entries[1].weight == doctest::Approx(0.375).epsilon(1e-15));
    for (std::size_t n = 0; n <= 30; ++n) CHECK(std::abs(binomial_pmf(n, 0.37).total - 1.0) <= 1e-14);

    const double p = 0.3;
    const auto geo = negbinomial_pmf(0, p, 40);
    REQUIRE(geo.entries.size() == 41);
    for (std::size_t n = 0; n <= 40; ++n) {
        CHECK(geo.entries[n].location == static_cast<double>(n));
        CHECK(geo.entries[n].weight == doctest::Approx(p * std::pow(1 - p, static_cast<double>(n))).epsilon(1e-14));
    }
    const auto nb = negbinomial_pmf(2, p, 5);
    CHECK(nb.entries.front().location == 2.0);
    CHECK(nb.entries.back().weight == doctest::Approx(p * 10 * std::pow(0.7, 3) * p * p).epsilon(1e-14));
}

TEST_CASE("heterogeneous trials") {
    const HeterogeneousTrialPlan plan({0.5, 1.0 / 3.0, 0.25});
    CHECK(heterogeneous_solution(plan, 0, 3) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(heterogeneous_oracle(plan, 0, 3) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(heterogeneous_solution(plan, 3, 3) == doctest::Approx(0.5 / 3.0 / 4.0).epsilon(1e-15));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> prob(0.01, 0.99);
    std::vector<double> ps(12);
    for (auto& q : ps) q = prob(rng);
    const HeterogeneousTrialPlan random(ps);
    for (std::size_t n = 0; n <= 12; ++n) {
        double row = 0.0;
        for (std::size_t m = 0; m <= n; ++m) {
            const double a = heterogeneous_solution(random, m, n);
            CHECK(std::abs(a - heterogeneous_oracle(random, m, n)) <= 1e-13);
            row += a;
        }
        CHECK(std::abs(row - 1.0) <= 1e-13);
    }

    const HeterogeneousTrialPlan constant(std::vector<double>(10, 0.3));
    const auto binom = binomial_pmf(10, 0.3);
    for (std::size_t m = 0; m <= 10; ++m) {
        CHECK(std::abs(heterogeneous_solution(constant, m, 10) - binom.entries[m].weight) <= 1e-13);
    }

    const auto harmonic = HeterogeneousTrialPlan::harmonic(50);
    for (std::size_t j = 1; j <= 50; ++j) {
        CHECK(std::abs(first_success_pmf(harmonic, j) - 1.0 / (j * (j + 1.0))) <= 1e-13);
    }
    CHECK(harmonic.time_scale() == TimeScale::harmonic(50));

    CHECK(code_of([&] { (void)heterogeneous_solution(plan, 2, 1); }) == Errc::kIndexError);
    CHECK(code_of([&] { (void)heterogeneous_solution(plan, 0, 4); }) == Errc::kIndexError);
    const HeterogeneousTrialPlan big(std::vector<double>(15, 0.5));
    CHECK(code_of([&] { (void)heterogeneous_oracle(big, 1, 15); }) == Errc::kTooLarge);
    CHECK(code_of([] { HeterogeneousTrialPlan({0.5, 1.0}); }) == Errc::kInvalidArgument);
    CHECK(code_of([] { HeterogeneousTrialPlan({0.0}); }) == Errc::kInvalidArgument);
}

TEST_CASE("stop-start branches") {
    CHECK(stopstart_branch(0, 0, 0.0) == 1.0);
    CHECK(stopstart_branch(1, 1, 1.0) == doctest::Approx(0.75 * std::exp(-0.5)).epsilon(1e-15));
    CHECK(stopstart_branch(1, 1, 1.0) == doctest::Approx(0.45490).epsilon(1e-5));
    const double t = 2.3;
    const int n = 2;
    CHECK(stopstart_branch(2, 2, t) ==
          doctest::Approx((4 * t * t + 4 * n * t + (n * n - 4 * n)) / (2.0 * std::pow(2.0, n + 2)) * std::exp(n / 2.0 - t))
              .epsilon(1e-14));
    CHECK(code_of([] { (void)stopstart_branch(4, 0, 0.1); }) == Errc::kBranchUnavailable);
}

TEST_CASE("total variation and the Poisson limit") {
    CHECK(total_variation({0.5, 0.5}, {0.5, 0.5}) == 0.0);
    CHECK(total_variation({1.0}, {0.0, 1.0}) == 1.0);
    CHECK(poisson_limit_distance(10, 0.0) == 0.0);

    const double rate = 0.4;
    const double e = std::exp(-rate);
    const double direct = 0.5 * (std::abs(1 - rate - e) + std::abs(rate - rate * e) + (1 - e - rate * e));
    CHECK(poisson_limit_distance(1, rate) == doctest::Approx(direct).epsilon(1e-14));

    double previous = 1.0;
    for (std::size_t n = 4; n <= 1024; n *= 2) {
        const double d = poisson_limit_distance(n, 1.0);
        CHECK(d < previous);
        previous = d;
    }
    CHECK(poisson_limit_distance(4, 1.0) / poisson_limit_distance(1024, 1.0) > 100.0);
}

TEST_CASE("CSV serialization") {
    const auto csv = to_csv(binomial_pmf(2, 0.5));
    CHECK(csv.rfind("# kind=mass", 0) == 0);
    CHECK(csv.find("\nlocation,weight\n") != std::string::npos);
    CHECK(csv.find("\n1,0.5\n") != std::string::npos);
    CHECK(to_csv(binomial_pmf(7, 0.3)) == to_csv(binomial_pmf(7, 0.3)));
}
