#include "semidiscrete/time_scale.hpp"

#include <algorithm>
#include <cmath>

#include "semidiscrete/errors.hpp"
#include "semidiscrete/format.hpp"

namespace semidiscrete {

namespace {

bool near(double a, double b) noexcept { return std::abs(a - b) <= kSnapTolerance; }

std::string describe(double t) { return shortest(t); }

}  // namespace

TimeScale::TimeScale(std::vector<Component> components) : components_(std::move(components)) {
    if (components_.empty()) {
        throw Error(Errc::kInvalidArgument, "time scale needs at least one component");
    }
    if (!near(components_.front().start, 0.0)) {
        throw Error(Errc::kInvalidArgument,
                    "time scale must start at 0 (got " + describe(components_.front().start) + ")");
    }
    components_.front().start = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        auto& c = components_[i];
        if (!std::isfinite(c.start) || !std::isfinite(c.end)) {
            throw Error(Errc::kInvalidArgument, "component " + std::to_string(i) + " is not finite");
        }
        if (c.end < c.start) {
            throw Error(Errc::kInvalidArgument, "component " + std::to_string(i) +
                                                    " has end " + describe(c.end) +
                                                    " before start " + describe(c.start));
        }
        if (c.end - c.start <= kSnapTolerance) c.end = c.start;
        if (i > 0 && c.start - components_[i - 1].end <= kSnapTolerance) {
            throw Error(Errc::kInvalidArgument,
                        "components " + std::to_string(i - 1) + " and " + std::to_string(i) +
                            " must be separated by a positive gap");
        }
    }
}

TimeScale TimeScale::uniform(double step, std::size_t n) {
    if (!(step > 0.0)) throw Error(Errc::kInvalidArgument, "uniform step must be > 0");
    std::vector<Component> cs;
    cs.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * step;
        cs.push_back({t, t});
    }
    return TimeScale(std::move(cs));
}

TimeScale TimeScale::stopstart(double on, double off, std::size_t n) {
    if (!(on > 0.0) || !(off > 0.0)) {
        throw Error(Errc::kInvalidArgument, "stopstart on/off lengths must be > 0");
    }
    if (n == 0) throw Error(Errc::kInvalidArgument, "stopstart needs n >= 1");
    std::vector<Component> cs;
    cs.reserve(n);
    const double period = on + off;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) * period;
        cs.push_back({a, a + on});
    }
    return TimeScale(std::move(cs));
}

TimeScale TimeScale::harmonic(std::size_t n) {
    std::vector<double> gaps(n);
    for (std::size_t i = 0; i < n; ++i) gaps[i] = 1.0 / static_cast<double>(i + 2);
    return from_gaps(gaps);
}

TimeScale TimeScale::from_gaps(std::span<const double> gaps) {
    std::vector<Component> cs;
    cs.reserve(gaps.size() + 1);
    double t = 0.0;
    cs.push_back({0.0, 0.0});
    for (double g : gaps) {
        if (!(g > 0.0)) throw Error(Errc::kInvalidArgument, "gaps must be > 0");
        t += g;
        cs.push_back({t, t});
    }
    return TimeScale(std::move(cs));
}

TimeScale TimeScale::interval(double length) {
    if (!(length > 0.0)) throw Error(Errc::kInvalidArgument, "interval length must be > 0");
    return TimeScale({{0.0, length}});
}

std::optional<std::size_t> TimeScale::component_of(double t) const noexcept {
    // First component whose end is not below t - snap.
    auto it = std::lower_bound(components_.begin(), components_.end(), t - kSnapTolerance,
                               [](const Component& c, double v) { return c.end < v; });
    if (it == components_.end()) return std::nullopt;
    if (t < it->start - kSnapTolerance) return std::nullopt;
    return static_cast<std::size_t>(it - components_.begin());
}

bool TimeScale::contains(double t) const noexcept { return component_of(t).has_value(); }

double TimeScale::gap_after(std::size_t i) const {
    if (i + 1 >= components_.size()) {
        throw Error(Errc::kHorizonBoundary, "no component after index " + std::to_string(i));
    }
    return components_[i + 1].start - components_[i].end;
}

bool TimeScale::has_intervals() const noexcept {
    return std::any_of(components_.begin(), components_.end(),
                       [](const Component& c) { return !c.is_point(); });
}

double TimeScale::max_graininess() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < components_.size(); ++i) {
        best = std::max(best, components_[i + 1].start - components_[i].end);
    }
    return best;
}

std::vector<double> TimeScale::scattered_points() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < components_.size(); ++i) out.push_back(components_[i].end);
    return out;
}

TimeScale TimeScale::periodic_extension(double t_max) const {
    if (t_max <= this->t_max() + kSnapTolerance) return restricted_to(t_max);
    if (components_.size() < 2) {
        throw Error(Errc::kInvalidArgument, "periodic extension needs at least two components");
    }
    auto cs = components_;
    const Component last = cs.back();
    const double gap = last.start - cs[cs.size() - 2].end;
    const double len = last.length();
    while (cs.back().end < t_max - kSnapTolerance) {
        const double a = cs.back().end + gap;
        cs.push_back({a, a + len});
    }
    return TimeScale(std::move(cs)).restricted_to(t_max);
}

TimeScale TimeScale::restricted_to(double t_max) const {
    if (t_max < -kSnapTolerance) {
        throw Error(Errc::kInvalidArgument, "horizon must be >= 0 (got " + describe(t_max) + ")");
    }
    std::vector<Component> cs;
    for (const auto& c : components_) {
        if (c.start > t_max + kSnapTolerance) break;
        Component kept = c;
        if (kept.end > t_max) kept.end = std::max(kept.start, t_max);
        cs.push_back(kept);
    }
    return TimeScale(std::move(cs));
}

double graininess(const TimeScale& ts, double t) {
    const auto idx = ts.component_of(t);
    if (!idx) throw Error(Errc::kTimeNotInScale, "t = " + describe(t) + " is not in the time scale");
    const auto& cs = ts.components();
    const auto& c = cs[*idx];
    const bool at_right_end = near(t, c.end);
    if (*idx + 1 == cs.size()) {
        if (at_right_end) {
            throw Error(Errc::kHorizonBoundary,
                        "graininess is undefined at t_max = " + describe(ts.t_max()));
        }
        return 0.0;
    }
    return at_right_end ? ts.gap_after(*idx) : 0.0;
}

double sigma(const TimeScale& ts, double t) { return t + graininess(ts, t); }

RegressivityReport check_regressivity(const TimeScale& ts, double k, double mu_x) {
    RegressivityReport report;
    const auto& cs = ts.components();
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
        const double mu = ts.gap_after(i);
        if (!(1.0 - k * mu / mu_x > 0.0)) {
            report.passed = false;
            report.failures.push_back({cs[i].end, mu});
        }
    }
    return report;
}

double dynamic_exp(const TimeScale& ts, double p, double t, double t0) {
    const auto i0 = ts.component_of(t0);
    const auto i1 = ts.component_of(t);
    if (!i0) throw Error(Errc::kTimeNotInScale, "t0 = " + describe(t0) + " is not in the time scale");
    if (!i1) throw Error(Errc::kTimeNotInScale, "t = " + describe(t) + " is not in the time scale");
    if (t < t0 - kSnapTolerance) {
        throw Error(Errc::kInvalidArgument, "dynamic_exp needs t0 <= t");
    }
    const auto& cs = ts.components();
    double continuous = 0.0;
    double product = 1.0;
    for (std::size_t i = *i0; i <= *i1; ++i) {
        const auto& c = cs[i];
        const double lo = std::max(c.start, t0);
        const double hi = std::min(c.end, t);
        if (hi > lo) continuous += hi - lo;
        // Right-scattered point c.end contributes when it lies in [t0, t).
        if (i + 1 < cs.size() && c.end >= t0 - kSnapTolerance && c.end < t - kSnapTolerance) {
            const double factor = 1.0 + p * ts.gap_after(i);
            if (factor == 0.0) {
                throw Error(Errc::kRegressivityViolation,
                            "1 + p mu vanishes at t = " + describe(c.end));
            }
            product *= factor;
        }
    }
    return std::exp(p * continuous) * product;
}

namespace {

struct SimpsonState {
    const std::function<double(double)>* f;
    std::size_t* evaluations;
    std::size_t budget;
};

double simpson_recurse(const SimpsonState& s, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    *s.evaluations += 2;
    if (*s.evaluations > s.budget) {
        throw Error(Errc::kQuadratureFailure, "evaluation budget exhausted");
    }
    const double flm = (*s.f)(lm);
    const double frm = (*s.f)(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol || (b - a) < 1e-14 * std::max(1.0, std::abs(a))) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(s, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(s, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        std::size_t& evaluations, std::size_t budget) {
    if (b <= a) return 0.0;
    // Start from a fixed 16-panel split so narrow features are not skipped
    // by the first Simpson estimate.
    constexpr int kPanels = 16;
    const double h = (b - a) / kPanels;
    SimpsonState state{&f, &evaluations, budget};
    double total = 0.0;
    double fa = f(a);
    evaluations += 1;
    for (int i = 0; i < kPanels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == kPanels) ? b : a + (i + 1) * h;
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        const double fb = f(hi);
        evaluations += 2;
        if (evaluations > budget) throw Error(Errc::kQuadratureFailure, "evaluation budget exhausted");
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_recurse(state, lo, hi, fa, fm, fb, whole, tol / kPanels, 48);
        fa = fb;
    }
    return total;
}

double delta_integral(const TimeScale& ts, const std::function<double(double)>& f, double t_from,
                      double t_to, double tol) {
    const auto i0 = ts.component_of(t_from);
    const auto i1 = ts.component_of(t_to);
    if (!i0) throw Error(Errc::kTimeNotInScale, "t_from = " + describe(t_from) + " is not in the time scale");
    if (!i1) throw Error(Errc::kTimeNotInScale, "t_to = " + describe(t_to) + " is not in the time scale");
    if (t_to < t_from - kSnapTolerance) {
        throw Error(Errc::kInvalidArgument, "delta_integral needs t_from <= t_to");
    }
    const auto& cs = ts.components();
    std::size_t evaluations = 0;
    double sum = 0.0;
    for (std::size_t i = *i0; i <= *i1; ++i) {
        const auto& c = cs[i];
        const double lo = std::max(c.start, t_from);
        const double hi = std::min(c.end, t_to);
        if (hi - lo > kSnapTolerance) sum += adaptive_simpson(f, lo, hi, tol, evaluations);
        if (i + 1 < cs.size() && c.end >= t_from - kSnapTolerance && c.end < t_to - kSnapTolerance) {
            sum += ts.gap_after(i) * f(c.end);
        }
    }
    return sum;
}

Grid Grid::build(const TimeScale& ts, std::optional<double> h_out) {
    if (h_out && !(*h_out > 0.0)) throw Error(Errc::kInvalidArgument, "h_out must be > 0");
    constexpr std::size_t kMaxPoints = 10'000'000;
    Grid grid;
    const auto& cs = ts.components();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto& c = cs[i];
        const bool last = i + 1 == cs.size();
        const double mu = last ? 0.0 : ts.gap_after(i);
        const GridPoint right_end{c.end, last ? PointKind::kRightDense : PointKind::kRightScattered,
                                  mu, i, last};
        if (c.is_point()) {
            grid.points_.push_back(right_end);
            continue;
        }
        std::size_t n_sub = 64;
        if (h_out) {
            const double ratio = std::ceil(c.length() / *h_out - 1e-9);
            if (ratio > static_cast<double>(kMaxPoints)) {
                throw Error(Errc::kTooLarge, "h_out gives too many grid points");
            }
            n_sub = std::max<std::size_t>(2, static_cast<std::size_t>(ratio));
            if (n_sub % 2 != 0) ++n_sub;
        }
        const double h = c.length() / static_cast<double>(n_sub);
        for (std::size_t j = 0; j < n_sub; ++j) {
            grid.points_.push_back({c.start + static_cast<double>(j) * h, PointKind::kRightDense, 0.0, i, false});
        }
        grid.points_.push_back(right_end);
        if (grid.points_.size() > kMaxPoints) throw Error(Errc::kTooLarge, "grid is too large");
    }
    return grid;
}

std::optional<std::size_t> Grid::find(double t) const noexcept {
    auto it = std::lower_bound(points_.begin(), points_.end(), t - kSnapTolerance,
                               [](const GridPoint& p, double v) { return p.t < v; });
    if (it == points_.end() || !near(it->t, t)) return std::nullopt;
    return static_cast<std::size_t>(it - points_.begin());
}

std::string to_literal(const TimeScale& ts) {
    std::string out = "[";
    const auto& cs = ts.components();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i > 0) out += ",";
        if (cs[i].is_point()) {
            out += shortest(cs[i].start);
        } else {
            out += "[" + shortest(cs[i].start) + "," + shortest(cs[i].end) + "]";
        }
    }
    return out + "]";
}

}  // namespace semidiscrete
