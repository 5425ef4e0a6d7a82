#include <cmath>
#include <vector>

#include "doctest.h"
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

TEST_CASE("graininess on the stop-start scale") {
    const auto ts = TimeScale::stopstart(0.5, 0.5, 4);
    CHECK(graininess(ts, 0.25) == 0.0);
    CHECK(graininess(ts, 0.5) == 0.5);
    CHECK(graininess(ts, 1.0) == 0.0);
    CHECK(sigma(ts, 0.25) == 0.25);
    CHECK(sigma(ts, 1.5) == doctest::Approx(2.0));
}

TEST_CASE("graininess on the harmonic scale") {
    const auto ts = TimeScale::harmonic(10);
    CHECK(graininess(ts, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(sigma(ts, 0.5) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(ts.components().size() == 11);
    CHECK(ts.max_graininess() == 0.5);
}

TEST_CASE("sigma on a constant-step scale") {
    const double p = 0.25;
    const auto ts = TimeScale::uniform(p, 10);
    CHECK(sigma(ts, 2 * p) == doctest::Approx(3 * p));
}

TEST_CASE("graininess errors") {
    const auto ts = TimeScale::stopstart(0.5, 0.5, 2);
    CHECK(code_of([&] { (void)graininess(ts, 0.75); }) == Errc::kTimeNotInScale);
    CHECK(code_of([&] { (void)graininess(ts, ts.t_max()); }) == Errc::kHorizonBoundary);
    CHECK(code_of([&] { (void)sigma(ts, -1.0); }) == Errc::kTimeNotInScale);
}

TEST_CASE("snap tolerance on endpoints") {
    const auto ts = TimeScale::stopstart(0.5, 0.5, 2);
    CHECK(ts.contains(0.5 + 5e-13));
    CHECK(graininess(ts, 0.5 + 5e-13) == doctest::Approx(0.5));
    CHECK_FALSE(ts.contains(0.5 + 1e-9));
}

TEST_CASE("malformed component lists are rejected") {
    CHECK(code_of([] { TimeScale({{0.5, 1.0}}); }) == Errc::kInvalidArgument);
    CHECK(code_of([] { TimeScale({{0.0, 1.0}, {1.0, 2.0}}); }) == Errc::kInvalidArgument);
    CHECK(code_of([] { TimeScale({{0.0, 1.0}, {0.5, 2.0}}); }) == Errc::kInvalidArgument);
    CHECK(code_of([] { TimeScale({{0.0, -1.0}}); }) == Errc::kInvalidArgument);
    CHECK(code_of([] { TimeScale(std::vector<Component>{}); }) == Errc::kInvalidArgument);
}

TEST_CASE("regressivity reports") {
    CHECK(check_regressivity(TimeScale::uniform(0.25, 8), 1.0, 1.0).passed);
    const auto r = check_regressivity(TimeScale::uniform(1.0, 5), 1.0, 1.0);
    CHECK_FALSE(r.passed);
    REQUIRE(r.failures.size() == 5);
    CHECK(r.failures[0].t == 0.0);
    CHECK(r.failures[0].mu == 1.0);
    CHECK(check_regressivity(TimeScale::harmonic(200), 1.0, 1.0).passed);
    CHECK(check_regressivity(TimeScale::interval(3.0), 100.0, 1.0).passed);
}

TEST_CASE("dynamic exponential: classical and discrete reductions") {
    const auto iv = TimeScale::interval(10.0);
    CHECK(dynamic_exp(iv, -2.0, 3.0, 1.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-14));

    const double mu = 0.25;
    const auto u = TimeScale::uniform(mu, 40);
    for (int n : {0, 1, 7, 40}) {
        CHECK(dynamic_exp(u, -1.0, n * mu, 0.0) == doctest::Approx(std::pow(1.0 - mu, n)).epsilon(1e-14));
    }
}

TEST_CASE("dynamic exponential on the stop-start scale") {
    const auto ts = TimeScale::stopstart(0.5, 0.5, 8);
    for (int n = 0; n < 8; ++n) {
        for (double s : {0.0, 0.1, 0.37, 0.5}) {
            const double t = n + s;
            const double expected = std::pow(2.0, -n) * std::exp(n / 2.0 - t);
            CHECK(dynamic_exp(ts, -1.0, t, 0.0) == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("dynamic exponential semigroup and monotonicity") {
    const auto ts = TimeScale({{0.0, 0.3}, {0.5, 0.5}, {0.9, 1.4}, {1.6, 1.6}, {1.8, 2.5}});
    const std::vector<double> times{0.0, 0.1, 0.3, 0.5, 0.9, 1.2, 1.4, 1.6, 1.8, 2.5};
    const double p = -0.8;
    for (std::size_t a = 0; a < times.size(); ++a) {
        for (std::size_t b = a; b < times.size(); ++b) {
            for (std::size_t c = b; c < times.size(); ++c) {
                const double whole = dynamic_exp(ts, p, times[c], times[a]);
                const double split = dynamic_exp(ts, p, times[c], times[b]) * dynamic_exp(ts, p, times[b], times[a]);
                CHECK(std::abs(whole - split) <= 1e-12 * std::abs(whole));
            }
        }
    }
    double previous = 1.0;
    for (double t : times) {
        const double e = dynamic_exp(ts, p, t, 0.0);
        CHECK(e > 0.0);
        CHECK(e <= previous);
        previous = e;
    }
}

TEST_CASE("dynamic exponential rejects a vanishing factor") {
    const auto ts = TimeScale::uniform(0.5, 4);
    CHECK(code_of([&] { (void)dynamic_exp(ts, -2.0, 1.0, 0.0); }) == Errc::kRegressivityViolation);
}

TEST_CASE("delta integral: sums, integrals, additivity, linearity") {
    const auto u = TimeScale::uniform(0.25, 12);
    CHECK(delta_integral(u, [](double) { return 3.0; }, 0.0, 3.0) == doctest::Approx(3.0 * 12 * 0.25));

    const auto iv = TimeScale::interval(20.0);
    const double e = delta_integral(iv, [](double t) { return std::exp(-t); }, 0.0, 20.0);
    CHECK(std::abs(e - (1.0 - std::exp(-20.0))) <= 1e-10);
    CHECK(std::abs(e - 1.0) <= 1e-8);

    const auto ts = TimeScale({{0.0, 1.0}, {1.5, 1.5}, {2.0, 3.0}, {3.25, 3.25}, {4.0, 5.0}});
    auto f = [](double t) { return std::sin(t) + t * t; };
    auto g = [](double t) { return std::exp(-t); };
    const double tol = 1e-11;
    const double whole = delta_integral(ts, f, 0.0, 5.0, tol);
    for (double mid : {0.5, 1.0, 1.5, 2.0, 2.5, 3.25, 4.0}) {
        const double parts = delta_integral(ts, f, 0.0, mid, tol) + delta_integral(ts, f, mid, 5.0, tol);
        CHECK(std::abs(whole - parts) <= 4 * tol);
    }
    const double lin = delta_integral(ts, [&](double t) { return 2.0 * f(t) - 3.0 * g(t); }, 0.0, 5.0, tol);
    CHECK(std::abs(lin - (2.0 * whole - 3.0 * delta_integral(ts, g, 0.0, 5.0, tol))) <= 10 * tol);

    // closed form: intervals [0,1],[2,3],[4,5] of t^2 plus scattered points 1, 1.5, 3, 3.25
    auto sq = [](double t) { return t * t; };
    const double expected = (1.0 / 3.0) + (27.0 - 8.0) / 3.0 + (125.0 - 64.0) / 3.0 +
                            0.5 * 1.0 + 0.5 * 2.25 + 0.25 * 9.0 + 0.75 * 3.25 * 3.25;
    CHECK(std::abs(delta_integral(ts, sq, 0.0, 5.0, tol) - expected) <= 4 * tol);
}

TEST_CASE("adaptive Simpson reports failure when the budget runs out") {
    std::size_t evals = 0;
    auto wild = [](double t) { return std::sin(1.0 / (t + 1e-9)); };
    CHECK(code_of([&] { (void)adaptive_simpson(wild, 0.0, 1.0, 1e-14, evals, 2000); }) == Errc::kQuadratureFailure);
}

TEST_CASE("generators") {
    const auto s = TimeScale::stopstart(0.5, 0.5, 3);
    REQUIRE(s.components().size() == 3);
    CHECK(s.components()[2] == Component{2.0, 2.5});
    CHECK(s.scattered_points() == std::vector<double>{0.5, 1.5});
    const auto u = TimeScale::uniform(0.5, 4);
    CHECK(u.t_max() == 2.0);
    CHECK_FALSE(u.has_intervals());
    const std::vector<double> gaps{0.5, 0.25};
    CHECK(TimeScale::from_gaps(gaps) == TimeScale({{0, 0}, {0.5, 0.5}, {0.75, 0.75}}));
}

TEST_CASE("periodic extension and restriction") {
    const auto s = TimeScale::stopstart(0.5, 0.5, 2);
    const auto ext = s.periodic_extension(5.25);
    CHECK(ext.components().size() == 6);
    CHECK(ext.t_max() == doctest::Approx(5.25));
    CHECK(ext.components()[4] == Component{4.0, 4.5});
    const auto r = TimeScale::uniform(0.25, 20).restricted_to(1.1);
    CHECK(r.t_max() == 1.0);
    CHECK(r.components().size() == 5);
    CHECK(TimeScale::interval(3.0).restricted_to(2.0) == TimeScale::interval(2.0));
}

TEST_CASE("output grid") {
    const auto ts = TimeScale({{0.0, 1.0}, {1.5, 1.5}, {2.0, 3.0}});
    const auto grid = Grid::build(ts, 0.1);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i].t > grid[i - 1].t);
    REQUIRE(grid.find(1.5));
    CHECK(grid[*grid.find(1.5)].kind == PointKind::kRightScattered);
    CHECK(grid[*grid.find(1.5)].mu == 0.5);
    CHECK(grid[*grid.find(1.0)].mu == 0.5);
    CHECK(grid.points().back().horizon);
    CHECK(grid.size() == 11 + 1 + 11);
    CHECK(Grid::build(TimeScale::interval(1.0)).size() == 65);
    CHECK(to_literal(ts) == "[[0,1],1.5,[2,3]]");
}
