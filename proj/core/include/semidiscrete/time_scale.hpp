#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace semidiscrete {

/// Absolute tolerance used when snapping a time onto a component endpoint.
inline constexpr double kSnapTolerance = 1e-12;

/// One connected piece of a time scale: a closed interval [start, end] with
/// end > start, or an isolated point (start == end).
struct Component {
    double start = 0.0;
    double end = 0.0;

    [[nodiscard]] bool is_point() const noexcept { return end == start; }
    [[nodiscard]] double length() const noexcept { return end - start; }
    friend bool operator==(const Component&, const Component&) = default;
};

/// A closed subset of [0, t_max] made of finitely many intervals and
/// isolated points, ordered and separated by strictly positive gaps.
///
/// Every right endpoint except the last is right-scattered; its graininess
/// is the gap to the next component. Interior points and left endpoints of
/// intervals are right-dense.
class TimeScale {
public:
    /// Validates ordering, positive gaps, and min = 0. Throws
    /// Error(kInvalidArgument) on a malformed component list.
    explicit TimeScale(std::vector<Component> components);

    /// {0, step, 2 step, ..., n step}
    static TimeScale uniform(double step, std::size_t n);
    /// Union over i < n of [i (on + off), i (on + off) + on].
    static TimeScale stopstart(double on, double off, std::size_t n);
    /// {0, 1/2, 1/2 + 1/3, ...} with n gaps; the i-th gap is 1/(i + 1).
    static TimeScale harmonic(std::size_t n);
    /// {0, g_1, g_1 + g_2, ...}: a purely discrete scale with the given gaps.
    static TimeScale from_gaps(std::span<const double> gaps);
    /// Single interval [0, length].
    static TimeScale interval(double length);

    [[nodiscard]] const std::vector<Component>& components() const noexcept { return components_; }
    [[nodiscard]] double t_max() const noexcept { return components_.back().end; }

    [[nodiscard]] bool contains(double t) const noexcept;
    /// Index of the component holding t, if any (snap tolerance applied).
    [[nodiscard]] std::optional<std::size_t> component_of(double t) const noexcept;

    /// Gap between component i and component i + 1 (i must not be the last).
    [[nodiscard]] double gap_after(std::size_t i) const;

    [[nodiscard]] bool has_intervals() const noexcept;
    [[nodiscard]] bool has_scattered_points() const noexcept { return components_.size() > 1; }
    /// Largest graininess over the scale (0 for a single interval).
    [[nodiscard]] double max_graininess() const noexcept;
    /// Right-scattered points in increasing order (every right endpoint but the last).
    [[nodiscard]] std::vector<double> scattered_points() const;

    /// Repeats the last (gap, component) pattern until the scale reaches
    /// t_max, then restricts to [0, t_max]. Needs at least two components.
    [[nodiscard]] TimeScale periodic_extension(double t_max) const;
    /// T ∩ [0, t_max]; the new horizon is the largest point of T not above t_max.
    [[nodiscard]] TimeScale restricted_to(double t_max) const;

    friend bool operator==(const TimeScale&, const TimeScale&) = default;

private:
    std::vector<Component> components_;
};

/// μ(t). Throws kTimeNotInScale when t is not in the scale and
/// kHorizonBoundary when t = t_max.
double graininess(const TimeScale& ts, double t);

/// σ(t) = t + μ(t); same errors as graininess.
double sigma(const TimeScale& ts, double t);

struct RegressivityFailure {
    double t = 0.0;
    double mu = 0.0;
};

struct RegressivityReport {
    bool passed = true;
    std::vector<RegressivityFailure> failures;
};

/// Checks 1 - k μ(t) / mu_x > 0 at every right-scattered t < t_max.
RegressivityReport check_regressivity(const TimeScale& ts, double k, double mu_x);

/// Time-scale exponential e_p(t; t0) for constant p: exp(p L) times the
/// product of (1 + p μ(s)) over right-scattered s in [t0, t), where L is the
/// length of the continuous part of [t0, t). Throws kRegressivityViolation
/// when a factor vanishes.
double dynamic_exp(const TimeScale& ts, double p, double t, double t0);

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr std::size_t kQuadratureBudget = 1'000'000;

/// Delta integral of f over [t_from, t_to): μ-weighted sum over the
/// right-scattered points plus adaptive Simpson over the continuous parts,
/// each to absolute error <= tol. Throws kQuadratureFailure when the
/// evaluation budget runs out.
double delta_integral(const TimeScale& ts, const std::function<double(double)>& f, double t_from,
                      double t_to, double tol = kDefaultQuadTol);

/// Adaptive Simpson on a plain interval [a, b]. `evaluations` accumulates
/// the number of calls to f.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        std::size_t& evaluations, std::size_t budget = kQuadratureBudget);

enum class PointKind { kRightDense, kRightScattered };

struct GridPoint {
    double t = 0.0;
    PointKind kind = PointKind::kRightDense;
    double mu = 0.0;
    std::size_t component = 0;
    /// True only for the final point t_max, where μ is undefined.
    bool horizon = false;
};

/// Output grid over a time scale. Every component endpoint appears exactly
/// once; interval interiors are sampled with an even number of equal
/// sub-steps no longer than h_out (default: length / 64).
class Grid {
public:
    Grid() = default;
    static Grid build(const TimeScale& ts, std::optional<double> h_out = std::nullopt);

    [[nodiscard]] const std::vector<GridPoint>& points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
    [[nodiscard]] const GridPoint& operator[](std::size_t i) const { return points_[i]; }

    /// Index of the grid point at t (snap tolerance applied).
    [[nodiscard]] std::optional<std::size_t> find(double t) const noexcept;

    /// Mutable access for constructing grids by hand (tests, restricted outputs).
    std::vector<GridPoint>& mutable_points() noexcept { return points_; }

private:
    std::vector<GridPoint> points_;
};

/// Renders the literal form, e.g. [[0,0.5],1,[2,2.5]].
std::string to_literal(const TimeScale& ts);

}  // namespace semidiscrete
