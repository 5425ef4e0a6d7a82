#include "semidiscrete/distributions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "semidiscrete/errors.hpp"
#include "semidiscrete/format.hpp"
#include "semidiscrete/poisson.hpp"

namespace semidiscrete {

std::string_view to_string(TableKind kind) noexcept {
    switch (kind) {
        case TableKind::kMass: return "mass";
        case TableKind::kDensitySampled: return "density-sampled";
        case TableKind::kMixed: return "mixed";
    }
    return "unknown";
}

double DistributionTable::weight_sum() const noexcept {
    double s = 0.0;
    for (const auto& e : entries) s += e.weight;
    return s;
}

double DistributionTable::min_value() const noexcept {
    double lo = 0.0;
    for (const auto& e : entries) lo = std::min(lo, e.value);
    return lo;
}

bool DistributionTable::is_probability(double tol) const noexcept {
    if (!std::isfinite(total) || min_value() < -1e-14) return false;
    return std::abs(total - 1.0) <= tol + tail_bound;
}

std::string to_csv(const DistributionTable& table) {
    std::string out = "# kind=" + std::string(to_string(table.kind));
    if (!table.parameters.empty()) out += ", " + table.parameters;
    out += ", total=" + digits17(table.total) + ", tail_bound=" + digits17(table.tail_bound) + "\n";
    out += "location,weight\n";
    for (const auto& e : table.entries) out += digits17(e.location) + "," + digits17(e.weight) + "\n";
    return out;
}

namespace {

void require_nonnegative_field(const SolutionField& field) {
    if (!field.nonnegative_initial()) {
        throw Error(Errc::kNegativeInitialData,
                    "sections of fields with negative initial data are not distributions");
    }
}

// Quadrature weights for samples t[0..n] of one interval: composite Simpson
// when the spacing is uniform and the panel count even, trapezoid otherwise.
std::vector<double> interval_weights(const std::vector<double>& t) {
    const std::size_t n = t.size();
    std::vector<double> w(n, 0.0);
    if (n < 2) return w;
    const std::size_t panels = n - 1;
    const double h = (t.back() - t.front()) / static_cast<double>(panels);
    bool uniform = true;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, h)) uniform = false;
    }
    if (uniform && panels % 2 == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double c = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            w[i] = c * h / 3.0;
        }
        return w;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double half = 0.5 * (t[i] - t[i - 1]);
        w[i - 1] += half;
        w[i] += half;
    }
    return w;
}

}  // namespace

DistributionTable time_section(const SolutionField& field, SpaceIndex m) {
    require_nonnegative_field(field);
    const auto [lo, hi] = field.overall_window();
    if (m < lo || m > hi) {
        throw Error(Errc::kIndexOutOfWindow, "m = " + std::to_string(m) + " outside stored window [" +
                                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    const auto& grid = field.grid();
    const auto& ts = field.scale();
    DistributionTable table;
    const bool intervals = ts.has_intervals();
    table.kind = !intervals ? TableKind::kMass
                 : ts.has_scattered_points() ? TableKind::kMixed
                                             : TableKind::kDensitySampled;
    table.entries.reserve(grid.size());

    std::size_t g = 0;
    while (g < grid.size()) {
        const std::size_t c = *ts.component_of(grid[g].t);
        std::size_t end = g;
        std::vector<double> times;
        while (end < grid.size() && *ts.component_of(grid[end].t) == c) times.push_back(grid[end++].t);
        const bool is_interval = !ts.components()[c].is_point();
        const auto w = is_interval ? interval_weights(times) : std::vector<double>(times.size(), 0.0);
        for (std::size_t i = g; i < end; ++i) {
            const double u = field.value(m, i);
            double weight = w[i - g] * u;
            if (grid[i].kind == PointKind::kRightScattered) weight += grid[i].mu * u;
            table.entries.push_back({grid[i].t, u, weight});
        }
        g = end;
    }
    const double t_end = grid.points().back().t;
    const double t_begin = grid.points().front().t;
    if (table.kind == TableKind::kMass) {
        table.total = table.weight_sum();
    } else {
        table.total = field.branch_integral(m, t_begin, t_end);
    }
    // Mass at or below branch m at the horizon still has to pass m.
    double pending = 0.0;
    for (SpaceIndex j = lo; j <= m; ++j) pending += field.value(j, grid.size() - 1);
    table.tail_bound = field.mu_x() * pending / field.k();
    table.parameters = "section=time, m=" + std::to_string(m) + ", mu_x=" + shortest(field.mu_x()) +
                       ", k=" + shortest(field.k()) + ", t_max=" + shortest(t_end);
    return table;
}

DistributionTable space_section(const SolutionField& field, double t) {
    require_nonnegative_field(field);
    const auto g = field.grid().find(t);
    if (!g) throw Error(Errc::kTimeNotOnGrid, "t = " + shortest(t) + " is not an output grid time");
    const auto& s = field.state(*g);
    DistributionTable table;
    table.kind = TableKind::kMass;
    for (SpaceIndex m = s.lo; m <= s.hi(); ++m) {
        const double u = s.at(m);
        table.entries.push_back({static_cast<double>(m) * field.mu_x(), u, field.mu_x() * u});
    }
    table.total = table.weight_sum();
    table.tail_bound = field.tail_mass(*g);
    table.parameters = "section=space, t=" + shortest(field.grid()[*g].t) +
                       ", mu_x=" + shortest(field.mu_x()) + ", k=" + shortest(field.k());
    return table;
}

DistributionTable poisson_pmf(double lambda, std::size_t m_max) {
    if (!(lambda >= 0.0)) throw Error(Errc::kInvalidArgument, "lambda must be >= 0");
    DistributionTable table;
    table.kind = TableKind::kMass;
    const auto w = poisson_weights(lambda, m_max);
    for (std::size_t m = 0; m <= m_max; ++m) table.entries.push_back({static_cast<double>(m), w[m], w[m]});
    table.total = table.weight_sum();
    table.tail_bound = poisson_upper_tail(lambda, m_max);
    table.parameters = "family=poisson, lambda=" + shortest(lambda);
    return table;
}

double erlang_density(double k, std::size_t x, double t) {
    if (!(k > 0.0)) throw Error(Errc::kInvalidArgument, "k must be > 0");
    if (!(t >= 0.0)) throw Error(Errc::kInvalidArgument, "t must be >= 0");
    // k * Poisson(kt) weight at x.
    return k * poisson_weights(k * t, x)[x];
}

namespace {

std::vector<double> binomial_row(std::size_t n, double p) {
    std::vector<double> row(n + 1, 0.0);
    if (p <= 0.0) {
        row[0] = 1.0;
        return row;
    }
    if (p >= 1.0) {
        row[n] = 1.0;
        return row;
    }
    const double q = 1.0 - p;
    // Start from the larger end so the seed does not underflow first.
    if (p <= 0.5) {
        row[0] = std::pow(q, static_cast<double>(n));
        for (std::size_t m = 0; m < n; ++m) {
            row[m + 1] = row[m] * static_cast<double>(n - m) / static_cast<double>(m + 1) * (p / q);
        }
    } else {
        row[n] = std::pow(p, static_cast<double>(n));
        for (std::size_t m = n; m > 0; --m) {
            row[m - 1] = row[m] * static_cast<double>(m) / static_cast<double>(n - m + 1) * (q / p);
        }
    }
    return row;
}

}  // namespace

DistributionTable binomial_pmf(std::size_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::kInvalidArgument, "p must lie in [0, 1]");
    DistributionTable table;
    table.kind = TableKind::kMass;
    const auto row = binomial_row(n, p);
    for (std::size_t m = 0; m <= n; ++m) table.entries.push_back({static_cast<double>(m), row[m], row[m]});
    table.total = table.weight_sum();
    table.parameters = "family=binomial, n=" + std::to_string(n) + ", p=" + shortest(p);
    return table;
}

DistributionTable negbinomial_pmf(std::size_t m, double p, std::size_t n_max) {
    if (!(p > 0.0 && p < 1.0)) throw Error(Errc::kInvalidArgument, "p must lie in (0, 1)");
    DistributionTable table;
    table.kind = TableKind::kMass;
    const double q = 1.0 - p;
    // C(n, m) q^{n-m} p^m, advanced in n: ratio (n + 1) / (n + 1 - m) * q.
    double term = std::pow(p, static_cast<double>(m));
    for (std::size_t n = m; n <= n_max; ++n) {
        if (n > m) term *= static_cast<double>(n) / static_cast<double>(n - m) * q;
        table.entries.push_back({static_cast<double>(n), term, p * term});
    }
    table.total = table.weight_sum();
    table.tail_bound = std::max(0.0, 1.0 - table.total);
    table.parameters = "family=negbinomial, m=" + std::to_string(m) + ", p=" + shortest(p);
    return table;
}

HeterogeneousTrialPlan::HeterogeneousTrialPlan(std::vector<double> probs) : probs_(std::move(probs)) {
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (!(probs_[i] > 0.0 && probs_[i] < 1.0)) {
            throw Error(Errc::kInvalidArgument, "p_" + std::to_string(i + 1) + " = " +
                                                    shortest(probs_[i]) + " must lie in (0, 1)");
        }
    }
}

HeterogeneousTrialPlan HeterogeneousTrialPlan::harmonic(std::size_t n) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = 1.0 / static_cast<double>(i + 2);
    return HeterogeneousTrialPlan(std::move(p));
}

TimeScale HeterogeneousTrialPlan::time_scale() const { return TimeScale::from_gaps(probs_); }

std::vector<double> heterogeneous_row(const HeterogeneousTrialPlan& plan, std::size_t n, double A) {
    if (n > plan.size()) {
        throw Error(Errc::kIndexError, "n = " + std::to_string(n) + " exceeds plan length " +
                                           std::to_string(plan.size()));
    }
    std::vector<double> row(n + 1, 0.0);
    row[0] = A;
    for (std::size_t i = 1; i <= n; ++i) {
        const double p = plan.probs()[i - 1];
        const double stay = 1.0 - p;
        for (std::size_t m = i; m > 0; --m) row[m] = stay * row[m] + p * row[m - 1];
        row[0] *= stay;
    }
    return row;
}

double heterogeneous_solution(const HeterogeneousTrialPlan& plan, std::size_t m, std::size_t n,
                              double A) {
    if (m > n) {
        throw Error(Errc::kIndexError, "m = " + std::to_string(m) + " exceeds n = " + std::to_string(n));
    }
    return heterogeneous_row(plan, n, A)[m];
}

double heterogeneous_oracle(const HeterogeneousTrialPlan& plan, std::size_t m, std::size_t n,
                            double A) {
    constexpr std::size_t kMaxTrials = 14;
    if (n > kMaxTrials) {
        throw Error(Errc::kTooLarge, "enumeration limited to n <= 14 (got " + std::to_string(n) + ")");
    }
    if (m > n || n > plan.size()) throw Error(Errc::kIndexError, "need m <= n <= plan length");
    // Bit i set: trial i + 1 contributes the stay factor K (a one in the
    // arrangement vector); exactly n - m of them.
    double sum = 0.0;
    const std::uint32_t limit = 1u << n;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != n - m) continue;
        double term = A;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = plan.probs()[i];
            term *= (mask >> i) & 1u ? (1.0 - p) : p;
        }
        sum += term;
    }
    return sum;
}

double first_success_pmf(const HeterogeneousTrialPlan& plan, std::size_t j) {
    if (j == 0 || j > plan.size()) throw Error(Errc::kIndexError, "trial index out of range");
    return plan.probs()[j - 1] * heterogeneous_solution(plan, 0, j - 1);
}

double stopstart_branch(std::size_t x, std::size_t n, double t) {
    const double nd = static_cast<double>(n);
    if (t < nd - kSnapTolerance || t > nd + 0.5 + kSnapTolerance) {
        throw Error(Errc::kTimeNotInScale, "t = " + shortest(t) + " is outside [n, n + 1/2]");
    }
    const double decay = std::exp(nd / 2.0 - t) / std::pow(2.0, nd);
    switch (x) {
        case 0: return decay;
        case 1: return (2.0 * t + nd) / 2.0 * decay;
        case 2: return (4.0 * t * t + 4.0 * nd * t + (nd * nd - 4.0 * nd)) / (2.0 * 4.0) * decay;
        case 3:
            return (8.0 * t * t * t + 12.0 * nd * t * t + 6.0 * (nd * nd - 4.0 * nd) * t +
                    (nd * nd * nd - 12.0 * nd * nd + 16.0 * nd)) /
                   (6.0 * 8.0) * decay;
        default:
            throw Error(Errc::kBranchUnavailable,
                        "closed form known for branches 0..3 only (got " + std::to_string(x) + ")");
    }
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        l1 += std::abs(x - y);
    }
    return 0.5 * l1;
}

double poisson_limit_distance(std::size_t n, double rate) {
    if (n == 0) throw Error(Errc::kInvalidArgument, "n must be >= 1");
    if (!(rate >= 0.0) || rate > static_cast<double>(n)) {
        throw Error(Errc::kInvalidArgument, "rate must lie in [0, n]");
    }
    const auto binom = binomial_row(n, rate / static_cast<double>(n));
    const auto pois = poisson_weights(rate, n);
    return total_variation(binom, pois) + 0.5 * poisson_upper_tail(rate, n);
}

}  // namespace semidiscrete
