#pragma once

// Reference computations that share no code path with the solver: closed
// forms evaluated in log space, a brute-force update loop, and classical RK4
// on the truncated lattice ODE system.

#include <cstddef>
#include <vector>

#include "semidiscrete/time_scale.hpp"

namespace semidiscrete::checks {

/// A (κt)^m e^{-κt} / m!
double continuous_closed_form(double A, double kappa, std::size_t m, double t);

/// A C(n, m) (1 - r)^{n-m} r^m, zero for m > n.
double discrete_closed_form(double A, double r, std::size_t n, std::size_t m);

struct OracleSnapshot {
    double t = 0.0;
    /// u(0..m_max) at t
    std::vector<double> values;
};

/// Point mass A at m = 0 driven across the scale: RK4 with step <= max_step
/// on every interval (system u_m' = -κ(u_m - u_{m-1}), m = 0..m_max, exact
/// for those indices because the system is lower triangular), and the
/// explicit update at every gap. Snapshots at every right-scattered point
/// (before the jump) and at t_max.
std::vector<OracleSnapshot> rk4_lattice(const TimeScale& ts, double A, double k, double mu_x,
                                        std::size_t m_max, double max_step);

}  // namespace semidiscrete::checks
