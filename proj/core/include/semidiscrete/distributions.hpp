#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "semidiscrete/transport.hpp"

namespace semidiscrete {

enum class TableKind { kMass, kDensitySampled, kMixed };

std::string_view to_string(TableKind kind) noexcept;

struct TableEntry {
    double location = 0.0;
    /// Function value at the location (u, or the pmf itself for mass tables).
    double value = 0.0;
    /// Delta weight times value: probability mass carried by this row.
    double weight = 0.0;
};

/// A section of a solution (or a closed-form family) read as a probability
/// mass / dynamic density function.
///
/// For mass tables `total` is the sum of weights. For sampled densities and
/// mixed tables `total` is the exact delta integral, while the weights use
/// composite Simpson on the sample points, so their sum is only a quadrature
/// estimate of it.
struct DistributionTable {
    TableKind kind = TableKind::kMass;
    std::vector<TableEntry> entries;
    double total = 0.0;
    /// Mass known to lie outside the table (truncated support or horizon).
    double tail_bound = 0.0;
    /// "key=value" pairs describing how the table was produced.
    std::string parameters;

    [[nodiscard]] double weight_sum() const noexcept;
    [[nodiscard]] double min_value() const noexcept;
    /// Nonnegative (down to -1e-14) and total within tol + tail_bound of 1.
    [[nodiscard]] bool is_probability(double tol) const noexcept;
};

/// `# kind=..., <parameters>, total=..., tail_bound=...` followed by a
/// `location,weight` header and one row per entry, all values printed with
/// 17 significant digits.
std::string to_csv(const DistributionTable& table);

/// u(m mu_x, ·) over the grid. Right-scattered points carry weight μ(t) u;
/// interval samples carry composite-Simpson weights. Throws
/// kIndexOutOfWindow when m is outside the stored window and
/// kNegativeInitialData for fields with negative initial values.
DistributionTable time_section(const SolutionField& field, SpaceIndex m);

/// u(·, t) on the lattice, location m mu_x, weight mu_x u. Throws
/// kTimeNotOnGrid when t is not a grid time.
DistributionTable space_section(const SolutionField& field, double t);

/// e^{-λ} λ^m / m! for m = 0..m_max.
DistributionTable poisson_pmf(double lambda, std::size_t m_max);

/// k^{x+1} t^x e^{-kt} / x!; x = 0 is the exponential density.
double erlang_density(double k, std::size_t x, double t);

/// C(n, m) (1 - p)^{n-m} p^m for m = 0..n.
DistributionTable binomial_pmf(std::size_t n, double p);

/// Trials needed in the discrete field's time section at branch m:
/// p C(n, m) (1 - p)^{n-m} p^m for n = m..n_max. For m = 0 this is the
/// geometric law p (1 - p)^n.
DistributionTable negbinomial_pmf(std::size_t m, double p, std::size_t n_max);

/// Per-trial success probabilities p_1..p_n, each strictly inside (0, 1).
class HeterogeneousTrialPlan {
public:
    explicit HeterogeneousTrialPlan(std::vector<double> probs);
    /// p_i = 1 / (i + 1).
    static HeterogeneousTrialPlan harmonic(std::size_t n);

    [[nodiscard]] const std::vector<double>& probs() const noexcept { return probs_; }
    [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
    /// Discrete time scale {0, p_1, p_1 + p_2, ...}.
    [[nodiscard]] TimeScale time_scale() const;

private:
    std::vector<double> probs_;
};

/// Sum over arrangements of n - m "stay" factors K_i = 1 - p_i and m "move"
/// factors L_i = p_i, times A. Evaluated with the O(n m) recurrence
/// u(m, n) = K_n u(m, n - 1) + L_n u(m - 1, n - 1).
double heterogeneous_solution(const HeterogeneousTrialPlan& plan, std::size_t m, std::size_t n,
                              double A = 1.0);

/// Whole row u(0..n, n) of the recurrence.
std::vector<double> heterogeneous_row(const HeterogeneousTrialPlan& plan, std::size_t n,
                                      double A = 1.0);

/// Literal enumeration of every arrangement; n <= 14 or kTooLarge.
double heterogeneous_oracle(const HeterogeneousTrialPlan& plan, std::size_t m, std::size_t n,
                            double A = 1.0);

/// Probability that the first success happens in trial j (1-based):
/// p_j * prod_{i<j} (1 - p_i).
double first_success_pmf(const HeterogeneousTrialPlan& plan, std::size_t j);

/// Closed-form branches x = 0..3 on the scale ∪[i, i + 1/2] with
/// A = k = mu_x = 1, for t in [n, n + 1/2]. kBranchUnavailable for x > 3.
double stopstart_branch(std::size_t x, std::size_t n, double t);

/// Half the L1 distance between two pmfs indexed from 0; missing entries
/// count as zero.
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

/// TV(binomial(n, rate / n), Poisson(rate)), including the Poisson mass
/// above n.
double poisson_limit_distance(std::size_t n, double rate);

}  // namespace semidiscrete
