#include "semidiscrete/checks/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace semidiscrete::checks {

double continuous_closed_form(double A, double kappa, std::size_t m, double t) {
    const double lambda = kappa * t;
    if (lambda == 0.0) return m == 0 ? A : 0.0;
    const double md = static_cast<double>(m);
    return A * std::exp(md * std::log(lambda) - lambda - std::lgamma(md + 1.0));
}

double discrete_closed_form(double A, double r, std::size_t n, std::size_t m) {
    if (m > n) return 0.0;
    long double binom = 1.0L;
    for (std::size_t i = 1; i <= m; ++i) {
        binom = binom * static_cast<long double>(n - m + i) / static_cast<long double>(i);
    }
    const long double stay = std::pow(1.0L - static_cast<long double>(r), static_cast<long double>(n - m));
    const long double move = std::pow(static_cast<long double>(r), static_cast<long double>(m));
    return static_cast<double>(static_cast<long double>(A) * binom * stay * move);
}

namespace {

void rk4_advance(std::vector<double>& u, double kappa, double length, double max_step) {
    if (length <= 0.0) return;
    const auto steps = static_cast<std::size_t>(std::ceil(length / max_step));
    const double h = length / static_cast<double>(steps);
    const std::size_t n = u.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto rhs = [kappa, n](const std::vector<double>& x, std::vector<double>& out) {
        for (std::size_t m = 0; m < n; ++m) {
            const double below = m == 0 ? 0.0 : x[m - 1];
            out[m] = -kappa * (x[m] - below);
        }
    };
    for (std::size_t s = 0; s < steps; ++s) {
        rhs(u, k1);
        for (std::size_t m = 0; m < n; ++m) tmp[m] = u[m] + 0.5 * h * k1[m];
        rhs(tmp, k2);
        for (std::size_t m = 0; m < n; ++m) tmp[m] = u[m] + 0.5 * h * k2[m];
        rhs(tmp, k3);
        for (std::size_t m = 0; m < n; ++m) tmp[m] = u[m] + h * k3[m];
        rhs(tmp, k4);
        for (std::size_t m = 0; m < n; ++m) {
            u[m] += h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
        }
    }
}

}  // namespace

std::vector<OracleSnapshot> rk4_lattice(const TimeScale& ts, double A, double k, double mu_x,
                                        std::size_t m_max, double max_step) {
    const double kappa = k / mu_x;
    std::vector<double> u(m_max + 1, 0.0);
    u[0] = A;
    std::vector<OracleSnapshot> out;
    const auto& cs = ts.components();
    for (std::size_t c = 0; c < cs.size(); ++c) {
        rk4_advance(u, kappa, cs[c].length(), max_step);
        out.push_back({cs[c].end, u});
        if (c + 1 == cs.size()) break;
        const double r = kappa * (cs[c + 1].start - cs[c].end);
        for (std::size_t m = m_max + 1; m-- > 0;) {
            const double below = m == 0 ? 0.0 : u[m - 1];
            u[m] = (1.0 - r) * u[m] + r * below;
        }
    }
    return out;
}

}  // namespace semidiscrete::checks
