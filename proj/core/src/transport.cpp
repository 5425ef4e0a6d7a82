#include "semidiscrete/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "semidiscrete/errors.hpp"
#include "semidiscrete/format.hpp"
#include "semidiscrete/poisson.hpp"

namespace semidiscrete {

double SpatialVector::sum() const noexcept {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

double SpatialVector::abs_sum() const noexcept {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s;
}

void TransportProblem::validate() const {
    auto require_positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(Errc::kInvalidArgument,
                        std::string(name) + ": must be > 0 (got " + shortest(v) + ")");
        }
    };
    require_positive(k, "k");
    require_positive(mu_x, "mu_x");
    require_positive(tail_tol, "tail_tol");
    if (std::holds_alternative<PointMass>(initial)) {
        require_positive(A, "A");
    } else {
        const auto& g = std::get<GeneralInitial>(initial);
        if (g.values.empty()) throw Error(Errc::kInvalidArgument, "initial: needs at least one value");
        for (double v : g.values) {
            if (!std::isfinite(v)) throw Error(Errc::kInvalidArgument, "initial: values must be finite");
        }
    }
}

SpatialVector TransportProblem::initial_state() const {
    if (std::holds_alternative<PointMass>(initial)) return {0, {A}};
    const auto& g = std::get<GeneralInitial>(initial);
    return {g.m_lo, g.values};
}

double TransportProblem::initial_mass() const { return mu_x * initial_state().sum(); }

bool TransportProblem::nonnegative_initial() const {
    const auto s = initial_state();
    return std::all_of(s.values.begin(), s.values.end(), [](double v) { return v >= 0.0; });
}

SpatialVector step_scattered_unchecked(const SpatialVector& state, double k, double mu_x,
                                       double mu_t) {
    const double r = (k / mu_x) * mu_t;
    const double stay = 1.0 - r;
    SpatialVector out{state.lo, std::vector<double>(state.values.size() + 1, 0.0)};
    for (std::size_t i = 0; i < state.values.size(); ++i) {
        out.values[i] += stay * state.values[i];
        out.values[i + 1] += r * state.values[i];
    }
    return out;
}

SpatialVector step_scattered(const SpatialVector& state, double k, double mu_x, double mu_t) {
    const double r = (k / mu_x) * mu_t;
    if (!(1.0 - r > 0.0)) {
        throw Error(Errc::kCflViolation, "1 - k mu_t / mu_x = " + shortest(1.0 - r) + " is not > 0");
    }
    return step_scattered_unchecked(state, k, mu_x, mu_t);
}

SpatialVector poisson_convolve(const SpatialVector& state, double lambda, std::size_t extent) {
    const auto w = poisson_weights(lambda, extent + state.values.size());
    const std::size_t n = state.values.size() + extent;
    SpatialVector out{state.lo, std::vector<double>(n, 0.0)};
    for (std::size_t m = 0; m < n; ++m) {
        double acc = 0.0;
        const std::size_t i_hi = std::min(m, state.values.size() - 1);
        for (std::size_t i = 0; i <= i_hi; ++i) acc += state.values[i] * w[m - i];
        out.values[m] = acc;
    }
    return out;
}

SpatialVector propagate_interval(const SpatialVector& state, double k, double mu_x, double dt,
                                 double tail_tol) {
    if (!(dt >= 0.0)) throw Error(Errc::kInvalidArgument, "dt must be >= 0");
    if (state.values.empty()) return state;
    const double lambda = (k / mu_x) * dt;
    const auto extent = poisson_extent(lambda, tail_tol);
    return poisson_convolve(state, lambda, extent.j_max);
}

std::pair<SpaceIndex, SpaceIndex> SolutionField::overall_window() const noexcept {
    SpaceIndex lo = initial_.lo;
    SpaceIndex hi = initial_.hi();
    for (const auto& s : states_) {
        lo = std::min(lo, s.lo);
        hi = std::max(hi, s.hi());
    }
    return {lo, hi};
}

const SolutionField::Segment& SolutionField::segment_for(double t) const {
    const auto c = scale_.component_of(t);
    if (!c) throw Error(Errc::kTimeNotInScale, "t = " + shortest(t) + " is not in the time scale");
    return segments_.at(*c);
}

SpatialVector SolutionField::state_at(double t) const {
    const auto& seg = segment_for(t);
    const double dt = std::max(0.0, t - seg.start);
    if (dt <= kSnapTolerance) return seg.left_state;
    return poisson_convolve(seg.left_state, (k_ / mu_x_) * dt, seg.extent);
}

double SolutionField::value_at(SpaceIndex m, double t) const {
    const auto& seg = segment_for(t);
    const auto& s = seg.left_state;
    const double dt = std::max(0.0, t - seg.start);
    if (dt <= kSnapTolerance) return s.at(m);
    if (m < s.lo || m > s.hi() + static_cast<SpaceIndex>(seg.extent)) return 0.0;
    const auto offset = static_cast<std::size_t>(m - s.lo);
    const auto w = poisson_weights((k_ / mu_x_) * dt, offset);
    double acc = 0.0;
    const std::size_t i_hi = std::min(offset, s.values.size() - 1);
    for (std::size_t i = 0; i <= i_hi; ++i) acc += s.values[i] * w[offset - i];
    return acc;
}

double SolutionField::branch_integral(SpaceIndex m, double t_from, double t_to) const {
    const auto c0 = scale_.component_of(t_from);
    const auto c1 = scale_.component_of(t_to);
    if (!c0) throw Error(Errc::kTimeNotInScale, "t_from = " + shortest(t_from) + " is not in the time scale");
    if (!c1) throw Error(Errc::kTimeNotInScale, "t_to = " + shortest(t_to) + " is not in the time scale");
    const auto& cs = scale_.components();
    const double kappa = k_ / mu_x_;
    double total = 0.0;
    for (std::size_t c = *c0; c <= *c1; ++c) {
        const auto& seg = segments_[c];
        const double lo = std::max(cs[c].start, t_from);
        const double hi = std::min(cs[c].end, t_to);
        if (hi - lo > kSnapTolerance) {
            // Integral of e^{-κs}(κs)^j/j! over [0, s] equals P(Poisson(κs) > j) / κ.
            const auto& s = seg.left_state;
            const double s0 = lo - seg.start;
            const double s1 = hi - seg.start;
            const bool in_window = m >= s.lo && m <= s.hi() + static_cast<SpaceIndex>(seg.extent);
            if (in_window) {
                const std::size_t i_hi =
                    std::min(static_cast<std::size_t>(m - s.lo), s.values.size() - 1);
                for (std::size_t i = 0; i <= i_hi; ++i) {
                    if (s.values[i] == 0.0) continue;
                    const auto j = static_cast<std::size_t>(m - s.lo) - i;
                    const double piece = poisson_upper_tail(kappa * s1, j) -
                                         (s0 > 0.0 ? poisson_upper_tail(kappa * s0, j) : 0.0);
                    total += s.values[i] * piece / kappa;
                }
            }
        }
        if (c + 1 < cs.size() && cs[c].end >= t_from - kSnapTolerance &&
            cs[c].end < t_to - kSnapTolerance) {
            total += scale_.gap_after(c) * value_at(m, cs[c].end);
        }
    }
    return total;
}

double SolutionField::initial_mass_up_to(SpaceIndex m) const noexcept {
    double s = 0.0;
    for (SpaceIndex i = initial_.lo; i <= std::min(m, initial_.hi()); ++i) s += initial_.at(i);
    return mu_x_ * s;
}

void SolutionField::poke(SpaceIndex m, std::size_t g, double v) {
    auto& s = states_.at(g);
    if (m < s.lo || m > s.hi()) {
        throw Error(Errc::kIndexOutOfWindow, "index " + std::to_string(m) + " outside stored window");
    }
    s.values[static_cast<std::size_t>(m - s.lo)] = v;
}

SolutionField solve(const TransportProblem& problem, const Grid& grid, const SolveOptions& options) {
    problem.validate();
    if (grid.empty()) throw Error(Errc::kHorizonEmpty, "output grid is empty");
    const auto& ts = problem.scale;
    if (options.enforce_regressivity) {
        const auto report = check_regressivity(ts, problem.k, problem.mu_x);
        if (!report.passed) {
            const auto& f = report.failures.front();
            throw Error(Errc::kCflViolation,
                        "(TS1) 1 - k mu(t) / mu_x > 0 fails at " + std::to_string(report.failures.size()) +
                            " point(s), first at t = " + shortest(f.t) + " with mu = " + shortest(f.mu));
        }
    }
    std::vector<std::size_t> owner(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto c = ts.component_of(grid[i].t);
        if (!c) {
            throw Error(Errc::kTimeNotInScale, "grid time " + shortest(grid[i].t) + " is not in the time scale");
        }
        if (i > 0 && !(grid[i].t > grid[i - 1].t)) {
            throw Error(Errc::kInvalidArgument, "grid times must be strictly increasing");
        }
        owner[i] = *c;
    }

    SolutionField field;
    field.grid_ = grid;
    field.scale_ = ts;
    field.k_ = problem.k;
    field.mu_x_ = problem.mu_x;
    field.initial_ = problem.initial_state();
    field.initial_mass_ = problem.initial_mass();
    field.nonnegative_initial_ = problem.nonnegative_initial();
    field.states_.resize(grid.size());
    field.tail_mass_.assign(grid.size(), 0.0);

    const auto& cs = ts.components();
    const double kappa = problem.kappa();
    std::size_t n_intervals = 0;
    for (const auto& c : cs) n_intervals += c.is_point() ? 0 : 1;
    const double per_interval_tol = problem.tail_tol / static_cast<double>(std::max<std::size_t>(1, n_intervals));

    SpatialVector state = field.initial_;
    double discarded = 0.0;
    std::size_t g = 0;
    for (std::size_t c = 0; c < cs.size(); ++c) {
        const auto& comp = cs[c];
        SolutionField::Segment seg{comp.start, comp.length(), state, 0};
        if (!comp.is_point()) {
            const double lambda_full = kappa * comp.length();
            const auto extent = poisson_extent(lambda_full, per_interval_tol);
            seg.extent = extent.j_max;
            const double dropped = problem.mu_x * extent.tail_bound * state.abs_sum();
            for (; g < grid.size() && owner[g] == c; ++g) {
                const double dt = grid[g].t - comp.start;
                if (dt <= kSnapTolerance) {
                    field.states_[g] = state;
                    field.tail_mass_[g] = discarded;
                } else {
                    field.states_[g] = poisson_convolve(state, kappa * dt, seg.extent);
                    field.tail_mass_[g] = discarded + dropped;
                }
            }
            state = poisson_convolve(state, lambda_full, seg.extent);
            discarded += dropped;
        } else {
            for (; g < grid.size() && owner[g] == c; ++g) {
                field.states_[g] = state;
                field.tail_mass_[g] = discarded;
            }
        }
        field.segments_.push_back(std::move(seg));
        if (c + 1 < cs.size()) {
            const double mu = ts.gap_after(c);
            state = options.enforce_regressivity
                        ? step_scattered(state, problem.k, problem.mu_x, mu)
                        : step_scattered_unchecked(state, problem.k, problem.mu_x, mu);
        }
    }
    return field;
}

}  // namespace semidiscrete
