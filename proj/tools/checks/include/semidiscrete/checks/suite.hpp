#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "semidiscrete/time_scale.hpp"
#include "semidiscrete/transport.hpp"

namespace semidiscrete::checks {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct NamedScale {
    std::string name;
    TransportProblem problem;
};

/// Interval, uniform steps 1/4, 1/2 and 0.9, harmonic, stop-start; all
/// with A = k = mu_x = 1 and horizons long enough for the time integrals.
std::vector<NamedScale> canonical_problems();

/// Random admissible problem: random k, A, mu_x, intervals and gaps with
/// every gap below mu_x / k, extended until the expected number of moves
/// past the origin reaches `min_moves`.
TransportProblem random_admissible_problem(std::mt19937_64& rng, double min_moves = 32.0);

// Each check returns one line's worth of verdict; tolerances are arguments
// so that the acceptance suite can pin them explicitly.

CheckResult check_continuous_closed_form(std::size_t m_max, const std::vector<double>& times,
                                         double rel_tol);
CheckResult check_discrete_closed_form(std::size_t n_max, double mu_t, double rel_tol);

struct ConservationTolerances {
    double space_tol = 1e-10;
    double time_tol = 1e-10;
    double agreement_tol = 2e-8;
    SpaceIndex m_max = 10;
};

struct ConservationOutcome {
    CheckResult sign;
    CheckResult space;
    CheckResult time;
};

/// Sign, space-sum and time-integral checks over the given problems. The
/// harmonic scale is exempt from the horizon-length requirement because its
/// total gap length grows only logarithmically.
ConservationOutcome check_conservation(const std::vector<NamedScale>& problems,
                                       const ConservationTolerances& tol,
                                       bool inject_sign_flip = false);

CheckResult check_heterogeneous(std::size_t plans, std::size_t n_max, double tol, std::uint64_t seed);
CheckResult check_harmonic_first_success(std::size_t k_max, double tol);
CheckResult check_stopstart_branches(std::size_t periods, std::size_t samples_per_period, double tol);
CheckResult check_pdf_sweep(double tol);
CheckResult check_convergence(const std::vector<std::size_t>& steps, double rate, double min_factor);
CheckResult check_ode_oracle(const TimeScale& ts, std::size_t m_max, double max_step, double tol,
                             const std::string& label);

struct SelftestOptions {
    bool inject_sign_flip = false;
    std::size_t random_scales = 10;
    std::uint64_t seed = 20241018;
};

/// Full oracle and conservation suite at desk sizes, one result per property.
std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

}  // namespace semidiscrete::checks
