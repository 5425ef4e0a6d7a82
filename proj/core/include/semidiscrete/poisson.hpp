#pragma once

#include <cstddef>
#include <vector>

namespace semidiscrete {

/// Poisson weights e^{-lambda} lambda^j / j! for j = 0..j_max, built with the
/// ratio recurrence. Large lambda starts from the mode in log space so that
/// e^{-lambda} never underflows the whole row.
std::vector<double> poisson_weights(double lambda, std::size_t j_max);

struct PoissonExtent {
    std::size_t j_max = 0;
    /// Upper bound on sum_{j > j_max} of the weights.
    double tail_bound = 0.0;
};

/// Smallest j_max whose discarded tail is provably <= tail_tol, using the
/// geometric bound w_{J+1} / (1 - lambda / (J + 2)) once J + 2 > lambda.
PoissonExtent poisson_extent(double lambda, double tail_tol);

/// P(N > j) for N ~ Poisson(lambda), computed without cancellation on
/// either side of the mode.
double poisson_upper_tail(double lambda, std::size_t j);

}  // namespace semidiscrete
