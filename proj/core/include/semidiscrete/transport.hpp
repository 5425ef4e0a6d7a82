#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "semidiscrete/time_scale.hpp"

namespace semidiscrete {

using SpaceIndex = std::int64_t;

/// Values u(m) for m in [lo, lo + values.size()); zero elsewhere.
struct SpatialVector {
    SpaceIndex lo = 0;
    std::vector<double> values;

    [[nodiscard]] SpaceIndex hi() const noexcept {
        return lo + static_cast<SpaceIndex>(values.size()) - 1;
    }
    [[nodiscard]] double at(SpaceIndex m) const noexcept {
        if (m < lo || m > hi()) return 0.0;
        return values[static_cast<std::size_t>(m - lo)];
    }
    [[nodiscard]] double sum() const noexcept;
    [[nodiscard]] double abs_sum() const noexcept;
};

/// Mass A at m = 0, zero elsewhere.
struct PointMass {
    friend bool operator==(const PointMass&, const PointMass&) = default;
};

/// Arbitrary finitely supported data: values[i] sits at m = m_lo + i.
struct GeneralInitial {
    SpaceIndex m_lo = 0;
    std::vector<double> values;
    friend bool operator==(const GeneralInitial&, const GeneralInitial&) = default;
};

using InitialCondition = std::variant<PointMass, GeneralInitial>;

inline constexpr double kDefaultTailTol = 1e-12;

/// u^Δt(x, t) + k ∇x u(x, t) = 0 on mu_x Z x scale, with the backward
/// spatial difference.
struct TransportProblem {
    double k = 1.0;
    double A = 1.0;
    double mu_x = 1.0;
    InitialCondition initial = PointMass{};
    TimeScale scale = TimeScale::interval(1.0);
    double tail_tol = kDefaultTailTol;

    /// Throws Error(kInvalidArgument) on non-positive k, A, mu_x or tail_tol.
    void validate() const;
    [[nodiscard]] SpatialVector initial_state() const;
    /// mu_x * sum of initial values.
    [[nodiscard]] double initial_mass() const;
    [[nodiscard]] bool nonnegative_initial() const;
    [[nodiscard]] double kappa() const noexcept { return k / mu_x; }
};

/// One right-scattered step of the update
///   new[m] = (1 - r) old[m] + r old[m - 1],  r = k mu_t / mu_x.
/// Throws kCflViolation unless 1 - r > 0.
SpatialVector step_scattered(const SpatialVector& state, double k, double mu_x, double mu_t);

/// Same update without the positivity requirement on 1 - r.
SpatialVector step_scattered_unchecked(const SpatialVector& state, double k, double mu_x,
                                       double mu_t);

/// Exact propagation across a continuous stretch of length dt: convolution
/// with the Poisson kernel of rate (k / mu_x) dt. The support grows upward
/// until the discarded kernel tail is <= tail_tol relative to the input.
SpatialVector propagate_interval(const SpatialVector& state, double k, double mu_x, double dt,
                                 double tail_tol = kDefaultTailTol);

/// Convolution with the Poisson(lambda) kernel keeping `extent` extra
/// indices above state.hi().
SpatialVector poisson_convolve(const SpatialVector& state, double lambda, std::size_t extent);

struct SolveOptions {
    /// When false the solver also runs on scales violating 1 - k μ / mu_x > 0.
    /// Only used to measure what goes wrong on inadmissible problems.
    bool enforce_regressivity = true;
};

/// Discrete solution stored on an output grid, with exact evaluation at any
/// time of the scale.
class SolutionField {
public:
    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] const TimeScale& scale() const noexcept { return scale_; }
    [[nodiscard]] double k() const noexcept { return k_; }
    [[nodiscard]] double mu_x() const noexcept { return mu_x_; }
    [[nodiscard]] double initial_mass() const noexcept { return initial_mass_; }
    [[nodiscard]] bool nonnegative_initial() const noexcept { return nonnegative_initial_; }

    [[nodiscard]] const SpatialVector& state(std::size_t g) const { return states_.at(g); }
    /// u(m mu_x, t_g); zero outside the stored window.
    [[nodiscard]] double value(SpaceIndex m, std::size_t g) const { return states_.at(g).at(m); }
    [[nodiscard]] std::pair<SpaceIndex, SpaceIndex> window(std::size_t g) const {
        return {states_.at(g).lo, states_.at(g).hi()};
    }
    /// Union of the windows over all grid times.
    [[nodiscard]] std::pair<SpaceIndex, SpaceIndex> overall_window() const noexcept;
    /// Upper bound on mu_x * (mass dropped by spatial truncation) up to t_g.
    [[nodiscard]] double tail_mass(std::size_t g) const { return tail_mass_.at(g); }

    /// Exact u(m mu_x, t) for any t in the scale.
    [[nodiscard]] double value_at(SpaceIndex m, double t) const;
    /// Exact spatial vector at any t in the scale.
    [[nodiscard]] SpatialVector state_at(double t) const;
    /// Exact delta integral of u(m mu_x, ·) over [t_from, t_to): closed-form
    /// Poisson tails on continuous parts, μ-weighted values at scattered points.
    [[nodiscard]] double branch_integral(SpaceIndex m, double t_from, double t_to) const;
    /// mu_x * sum of initial values at indices <= m.
    [[nodiscard]] double initial_mass_up_to(SpaceIndex m) const noexcept;

    /// Test hook: overwrite one stored value (fault injection).
    void poke(SpaceIndex m, std::size_t g, double v);

private:
    friend SolutionField solve(const TransportProblem&, const Grid&, const SolveOptions&);

    struct Segment {
        double start = 0.0;
        double length = 0.0;
        SpatialVector left_state;
        std::size_t extent = 0;
    };

    [[nodiscard]] const Segment& segment_for(double t) const;

    Grid grid_;
    TimeScale scale_ = TimeScale::interval(1.0);
    double k_ = 1.0;
    double mu_x_ = 1.0;
    double initial_mass_ = 0.0;
    bool nonnegative_initial_ = true;
    SpatialVector initial_;
    std::vector<Segment> segments_;
    std::vector<SpatialVector> states_;
    std::vector<double> tail_mass_;
};

/// Walks the scale left to right: exact Poisson propagation over intervals,
/// one update step at every right-scattered point. Throws kCflViolation when
/// the scale breaks 1 - k μ / mu_x > 0 and kHorizonEmpty for an empty grid.
SolutionField solve(const TransportProblem& problem, const Grid& grid,
                    const SolveOptions& options = {});

}  // namespace semidiscrete
