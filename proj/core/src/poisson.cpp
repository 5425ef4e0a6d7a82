#include "semidiscrete/poisson.hpp"

#include <algorithm>
#include <cmath>

#include "semidiscrete/errors.hpp"

namespace semidiscrete {

namespace {

constexpr double kDirectStartLimit = 500.0;

}  // namespace

std::vector<double> poisson_weights(double lambda, std::size_t j_max) {
    if (!(lambda >= 0.0)) throw Error(Errc::kInvalidArgument, "Poisson rate must be >= 0");
    std::vector<double> w(j_max + 1, 0.0);
    if (lambda == 0.0) {
        w[0] = 1.0;
        return w;
    }
    if (lambda <= kDirectStartLimit) {
        w[0] = std::exp(-lambda);
        for (std::size_t j = 0; j < j_max; ++j) {
            w[j + 1] = w[j] * lambda / static_cast<double>(j + 1);
        }
        return w;
    }
    const auto mode = static_cast<std::size_t>(std::floor(lambda));
    const double at_mode = std::exp(-lambda + static_cast<double>(mode) * std::log(lambda) -
                                    std::lgamma(static_cast<double>(mode) + 1.0));
    if (mode <= j_max) {
        w[mode] = at_mode;
        for (std::size_t j = mode; j < j_max; ++j) w[j + 1] = w[j] * lambda / static_cast<double>(j + 1);
        for (std::size_t j = mode; j > 0; --j) w[j - 1] = w[j] * static_cast<double>(j) / lambda;
    } else {
        double v = at_mode;
        for (std::size_t j = mode; j > 0; --j) {
            v *= static_cast<double>(j) / lambda;
            if (j - 1 <= j_max) w[j - 1] = v;
        }
    }
    return w;
}

PoissonExtent poisson_extent(double lambda, double tail_tol) {
    if (!(lambda >= 0.0)) throw Error(Errc::kInvalidArgument, "Poisson rate must be >= 0");
    if (!(tail_tol > 0.0)) throw Error(Errc::kInvalidArgument, "tail tolerance must be > 0");
    if (lambda == 0.0) return {0, 0.0};
    // Geometric bound applies once the ratio lambda / (J + 2) is below 1.
    auto j = static_cast<std::size_t>(std::ceil(lambda));
    const std::size_t limit = j + 64 + static_cast<std::size_t>(40.0 * std::sqrt(lambda) + 10.0 * lambda);
    auto w = poisson_weights(lambda, limit + 1);
    for (; j <= limit; ++j) {
        const double ratio = lambda / static_cast<double>(j + 2);
        const double bound = w[j + 1] / (1.0 - ratio);
        if (bound <= tail_tol) return {j, bound};
    }
    return {limit, w[limit + 1] / (1.0 - lambda / static_cast<double>(limit + 2))};
}

double poisson_upper_tail(double lambda, std::size_t j) {
    if (!(lambda >= 0.0)) throw Error(Errc::kInvalidArgument, "Poisson rate must be >= 0");
    if (lambda == 0.0) return 0.0;
    if (static_cast<double>(j) < lambda) {
        const auto w = poisson_weights(lambda, j);
        double lower = 0.0;
        for (double v : w) lower += v;
        return std::max(0.0, 1.0 - lower);
    }
    // Sum the upper terms directly; they decrease geometrically past the mode.
    const std::size_t span = 64 + static_cast<std::size_t>(40.0 * std::sqrt(lambda + 1.0));
    const auto w = poisson_weights(lambda, j + span);
    double tail = 0.0;
    for (std::size_t i = w.size(); i-- > j + 1;) tail += w[i];
    return tail;
}

}  // namespace semidiscrete
