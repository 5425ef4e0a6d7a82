#include "semidiscrete/checks/suite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semidiscrete/checks/oracles.hpp"
#include "semidiscrete/conservation.hpp"
#include "semidiscrete/distributions.hpp"
#include "semidiscrete/errors.hpp"
#include "semidiscrete/format.hpp"
#include "semidiscrete/poisson.hpp"

namespace semidiscrete::checks {

namespace {

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

double rel_err(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

TransportProblem unit_problem(TimeScale ts) {
    TransportProblem p;
    p.k = 1.0;
    p.A = 1.0;
    p.mu_x = 1.0;
    p.scale = std::move(ts);
    return p;
}

}  // namespace

std::vector<NamedScale> canonical_problems() {
    return {
        {"interval", unit_problem(TimeScale::interval(40.0))},
        {"uniform-0.25", unit_problem(TimeScale::uniform(0.25, 200))},
        {"uniform-0.5", unit_problem(TimeScale::uniform(0.5, 100))},
        {"uniform-0.9", unit_problem(TimeScale::uniform(0.9, 60))},
        {"harmonic", unit_problem(TimeScale::harmonic(400))},
        {"stopstart", unit_problem(TimeScale::stopstart(0.5, 0.5, 40))},
    };
}

TransportProblem random_admissible_problem(std::mt19937_64& rng, double min_moves) {
    std::uniform_real_distribution<double> param(0.5, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TransportProblem p;
    p.k = param(rng);
    p.A = param(rng);
    p.mu_x = param(rng);
    const double kappa = p.k / p.mu_x;
    std::vector<Component> cs;
    double t = 0.0;
    double moves = 0.0;
    while (true) {
        const bool interval = unit(rng) < 0.5;
        const double len = interval ? (0.05 + 1.45 * unit(rng)) / kappa : 0.0;
        cs.push_back({t, t + len});
        moves += kappa * len;
        if (moves >= min_moves) break;
        // Gap strictly below mu_x / k keeps 1 - k μ / mu_x in (0.05, 0.95).
        const double gap = (0.05 + 0.9 * unit(rng)) / kappa;
        moves += kappa * gap;
        t += len + gap;
    }
    p.scale = TimeScale(std::move(cs));
    return p;
}

CheckResult check_continuous_closed_form(std::size_t m_max, const std::vector<double>& times,
                                         double rel_tol) {
    CheckResult r{"continuous-time closed form", true, {}};
    const double horizon = *std::max_element(times.begin(), times.end());
    const auto problem = unit_problem(TimeScale::interval(horizon));
    const auto field = solve(problem, Grid::build(problem.scale));
    double worst = 0.0;
    for (double t : times) {
        for (std::size_t m = 0; m <= m_max; ++m) {
            const double got = field.value_at(static_cast<SpaceIndex>(m), t);
            worst = std::max(worst, rel_err(got, continuous_closed_form(1.0, 1.0, m, t)));
        }
    }
    r.passed = worst <= rel_tol;
    r.detail = "max relative error " + sci(worst) + " (m <= " + std::to_string(m_max) + ")";
    return r;
}

CheckResult check_discrete_closed_form(std::size_t n_max, double mu_t, double rel_tol) {
    CheckResult r{"discrete-time closed form", true, {}};
    const auto problem = unit_problem(TimeScale::uniform(mu_t, n_max));
    const auto field = solve(problem, Grid::build(problem.scale));
    double worst = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t m = 0; m <= n; ++m) {
            const double got = field.value(static_cast<SpaceIndex>(m), n);
            worst = std::max(worst, rel_err(got, discrete_closed_form(1.0, mu_t, n, m)));
        }
    }
    r.passed = worst <= rel_tol;
    r.detail = "max relative error " + sci(worst) + " (n <= " + std::to_string(n_max) + ")";
    return r;
}

ConservationOutcome check_conservation(const std::vector<NamedScale>& problems,
                                       const ConservationTolerances& tol, bool inject_sign_flip) {
    ConservationOutcome out{{"sign conservation", true, {}},
                            {"space-sum conservation", true, {}},
                            {"time-integral conservation", true, {}}};
    double worst_drift = 0.0;
    double worst_gap = 0.0;
    std::size_t sign_failures = 0;
    std::string first_space;
    std::string first_time;
    bool first = true;
    for (const auto& named : problems) {
        auto field = solve(named.problem, Grid::build(named.problem.scale));
        if (inject_sign_flip && first) field.poke(0, field.grid().size() / 2, -0.1);
        first = false;
        if (!check_sign(field)) {
            ++sign_failures;
            if (out.sign.passed) out.sign.detail = "negative value on " + named.name;
            out.sign.passed = false;
        }
        const auto space = check_space_conservation(field, named.problem.initial_mass(), tol.space_tol);
        worst_drift = std::max(worst_drift, space.max_drift);
        if (!space.passed && out.space.passed) {
            out.space.passed = false;
            first_space = named.name;
        }
        const double fraction = named.name == "harmonic" ? 1.0 : 0.1;
        try {
            const auto time = check_time_conservation(field, 0, tol.m_max, tol.time_tol,
                                                      tol.agreement_tol, fraction);
            worst_gap = std::max(worst_gap, time.max_pairwise_gap);
            if (!time.passed && out.time.passed) {
                out.time.passed = false;
                first_time = named.name;
            }
        } catch (const Error& e) {
            if (out.time.passed) first_time = named.name + " (" + e.what() + ")";
            out.time.passed = false;
        }
    }
    const std::string count = std::to_string(problems.size()) + " scales";
    if (out.sign.passed) out.sign.detail = "all values >= -1e-14 on " + count;
    out.space.detail = "max |S(t) - A mu_x| " + sci(worst_drift) + " on " + count +
                       (first_space.empty() ? "" : ", first failure on " + first_space);
    out.time.detail = "max branch disagreement " + sci(worst_gap) + " on " + count +
                      (first_time.empty() ? "" : ", first failure on " + first_time);
    return out;
}

CheckResult check_heterogeneous(std::size_t plans, std::size_t n_max, double tol, std::uint64_t seed) {
    CheckResult r{"heterogeneous arrangement sum", true, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> prob(0.01, 0.99);
    double worst = 0.0;
    double worst_solver = 0.0;
    double worst_row = 0.0;
    for (std::size_t p = 0; p < plans; ++p) {
        std::vector<double> probs(n_max);
        for (auto& v : probs) v = prob(rng);
        const HeterogeneousTrialPlan plan(probs);
        auto problem = unit_problem(plan.time_scale());
        const auto field = solve(problem, Grid::build(problem.scale));
        for (std::size_t n = 0; n <= n_max; ++n) {
            const auto row = heterogeneous_row(plan, n);
            double row_sum = 0.0;
            for (std::size_t m = 0; m <= n; ++m) {
                const double dp = heterogeneous_solution(plan, m, n);
                worst = std::max(worst, std::abs(dp - heterogeneous_oracle(plan, m, n)));
                worst_solver = std::max(worst_solver, std::abs(field.value(static_cast<SpaceIndex>(m), n) - dp));
                row_sum += row[m];
            }
            worst_row = std::max(worst_row, std::abs(row_sum - 1.0));
        }
    }
    r.passed = worst <= tol && worst_solver <= tol && worst_row <= tol;
    r.detail = "recurrence vs enumeration " + sci(worst) + ", solver vs recurrence " +
               sci(worst_solver) + ", row sums " + sci(worst_row) + " over " +
               std::to_string(plans) + " plans";
    return r;
}

CheckResult check_harmonic_first_success(std::size_t k_max, double tol) {
    CheckResult r{"harmonic first-success law", true, {}};
    const auto plan = HeterogeneousTrialPlan::harmonic(k_max);
    auto problem = unit_problem(TimeScale::harmonic(k_max));
    const auto field = solve(problem, Grid::build(problem.scale));
    double worst = 0.0;
    for (std::size_t j = 1; j <= k_max; ++j) {
        const double want = 1.0 / (static_cast<double>(j) * static_cast<double>(j + 1));
        worst = std::max(worst, std::abs(first_success_pmf(plan, j) - want));
        // Trial j happens across the gap after grid point j - 1.
        const double from_field = field.grid()[j - 1].mu * field.value(0, j - 1);
        worst = std::max(worst, std::abs(from_field - want));
    }
    r.passed = worst <= tol;
    r.detail = "max |f(k) - 1/(k(k+1))| " + sci(worst) + " for k <= " + std::to_string(k_max);
    return r;
}

CheckResult check_stopstart_branches(std::size_t periods, std::size_t samples_per_period, double tol) {
    CheckResult r{"stop-start branches", true, {}};
    auto problem = unit_problem(TimeScale::stopstart(0.5, 0.5, periods));
    const auto field = solve(problem, Grid::build(problem.scale));
    double worst = 0.0;
    for (std::size_t n = 0; n < periods; ++n) {
        for (std::size_t i = 0; i < samples_per_period; ++i) {
            const double t = static_cast<double>(n) +
                             0.5 * static_cast<double>(i) / static_cast<double>(samples_per_period - 1);
            for (std::size_t x = 0; x <= 3; ++x) {
                const double got = field.value_at(static_cast<SpaceIndex>(x), t);
                worst = std::max(worst, std::abs(got - stopstart_branch(x, n, t)));
            }
        }
    }
    r.passed = worst <= tol;
    r.detail = "max abs error " + sci(worst) + " over " + std::to_string(periods) + " periods x " +
               std::to_string(samples_per_period) + " samples x 4 branches";
    return r;
}

namespace {

struct Measured {
    bool space = true;
    bool time = true;
};

Measured measure_sections(const TransportProblem& problem, double tol) {
    Measured out;
    const auto grid = Grid::build(problem.scale);
    const auto field = solve(problem, grid, SolveOptions{false});
    auto is_pdf = [tol](const DistributionTable& t) {
        return std::isfinite(t.total) && t.min_value() >= kSignFloor &&
               std::abs(t.total - 1.0) <= tol + std::max(0.0, t.tail_bound);
    };
    for (std::size_t g = 0; g < grid.size() && out.space; ++g) {
        out.space = is_pdf(space_section(field, grid[g].t));
    }
    for (SpaceIndex m = 0; m <= 5 && out.time; ++m) out.time = is_pdf(time_section(field, m));
    return out;
}

}  // namespace

CheckResult check_pdf_sweep(double tol) {
    CheckResult r{"density conditions", true, {}};
    const double values[] = {0.5, 1.0, 2.0};
    const double fractions[] = {0.2, 0.9, 1.1};
    std::size_t cases = 0;
    std::size_t both = 0;
    std::string mismatch;
    for (double k : values) {
        for (double A : values) {
            for (double mu_x : values) {
                for (double frac : fractions) {
                    TransportProblem p;
                    p.k = k;
                    p.A = A;
                    p.mu_x = mu_x;
                    const double mu_t = frac * mu_x;
                    const bool regressive = 1.0 - k * mu_t / mu_x > 0.0;
                    p.scale = TimeScale::uniform(mu_t, regressive ? 600 : 60);
                    const auto verdict = check_pdf_conditions(p);
                    const auto measured = measure_sections(p, tol);
                    ++cases;
                    if (verdict.sections == PdfSections::kBoth) ++both;
                    const bool ok = verdict.space_sections == measured.space &&
                                    verdict.time_sections == measured.time;
                    if (!ok && mismatch.empty()) {
                        mismatch = "k=" + shortest(k) + " A=" + shortest(A) + " mu_x=" + shortest(mu_x) +
                                   " mu_t=" + shortest(mu_t) + " predicted " +
                                   std::string(to_string(verdict.sections));
                    }
                    r.passed = r.passed && ok;
                }
            }
        }
    }
    r.detail = std::to_string(cases) + " cases, " + std::to_string(both) + " with both sections";
    if (!mismatch.empty()) r.detail += ", first mismatch " + mismatch;
    return r;
}

CheckResult check_convergence(const std::vector<std::size_t>& steps, double rate, double min_factor) {
    CheckResult r{"Poisson limit of binomial sections", true, {}};
    std::vector<double> d;
    double worst_solver = 0.0;
    for (std::size_t n : steps) {
        d.push_back(poisson_limit_distance(n, rate));
        TransportProblem p;
        p.k = rate;
        p.A = 1.0;
        p.mu_x = 1.0;
        p.scale = TimeScale::uniform(1.0 / static_cast<double>(n), n);
        const auto field = solve(p, Grid::build(p.scale));
        const auto& s = field.state(field.grid().size() - 1);
        std::vector<double> pmf(s.values.begin(), s.values.end());
        const auto pois = poisson_weights(rate, pmf.size() - 1);
        const double tv = total_variation(pmf, pois) + 0.5 * poisson_upper_tail(rate, pmf.size() - 1);
        worst_solver = std::max(worst_solver, std::abs(tv - d.back()));
    }
    for (std::size_t i = 1; i < d.size(); ++i) r.passed = r.passed && d[i] < d[i - 1];
    const double factor = d.front() / d.back();
    r.passed = r.passed && factor > min_factor && worst_solver <= 1e-12;
    r.detail = "TV " + sci(d.front()) + " -> " + sci(d.back()) + ", shrink factor " + sci(factor) +
               ", solver vs closed form " + sci(worst_solver);
    return r;
}

CheckResult check_ode_oracle(const TimeScale& ts, std::size_t m_max, double max_step, double tol,
                             const std::string& label) {
    CheckResult r{"ODE oracle (" + label + ")", true, {}};
    auto problem = unit_problem(ts);
    const auto field = solve(problem, Grid::build(ts));
    const auto snaps = rk4_lattice(ts, 1.0, 1.0, 1.0, m_max, max_step);
    double worst = 0.0;
    for (const auto& s : snaps) {
        for (std::size_t m = 0; m <= m_max; ++m) {
            worst = std::max(worst, std::abs(field.value_at(static_cast<SpaceIndex>(m), s.t) - s.values[m]));
        }
    }
    r.passed = worst <= tol;
    r.detail = "max abs error " + sci(worst) + " at " + std::to_string(snaps.size()) + " points, m <= " +
               std::to_string(m_max);
    return r;
}

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
    std::vector<CheckResult> results;
    auto problems = canonical_problems();
    std::mt19937_64 rng(options.seed);
    for (std::size_t i = 0; i < options.random_scales; ++i) {
        problems.push_back({"random-" + std::to_string(i), random_admissible_problem(rng)});
    }
    auto conservation = check_conservation(problems, ConservationTolerances{}, options.inject_sign_flip);
    results.push_back(conservation.sign);
    results.push_back(conservation.time);
    results.push_back(conservation.space);
    results.push_back(check_pdf_sweep(1e-8));
    results.push_back(check_continuous_closed_form(40, {0.1, 1.0, 5.0, 20.0}, 1e-12));
    results.push_back(check_discrete_closed_form(60, 0.25, 1e-12));
    auto het = check_heterogeneous(20, 12, 1e-13, options.seed);
    const auto harmonic = check_harmonic_first_success(50, 1e-13);
    het.passed = het.passed && harmonic.passed;
    het.detail += "; " + harmonic.detail;
    results.push_back(het);
    results.push_back(check_stopstart_branches(6, 50, 1e-10));
    results.push_back(check_ode_oracle(TimeScale::stopstart(0.5, 0.5, 6), 15, 1e-4, 1e-6, "stop-start"));
    results.push_back(check_ode_oracle(TimeScale::harmonic(200), 15, 1e-4, 1e-6, "harmonic"));
    results.push_back(check_convergence({4, 8, 16, 32, 64, 128, 256, 512, 1024}, 1.0, 100.0));
    return results;
}

}  // namespace semidiscrete::checks
