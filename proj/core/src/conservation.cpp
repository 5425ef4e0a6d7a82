#include "semidiscrete/conservation.hpp"

#include <algorithm>
#include <cmath>

#include "semidiscrete/errors.hpp"
#include "semidiscrete/format.hpp"

namespace semidiscrete {

bool check_sign(const SolutionField& field) {
    for (std::size_t g = 0; g < field.grid().size(); ++g) {
        for (double v : field.state(g).values) {
            if (!(v >= kSignFloor)) return false;
        }
    }
    return true;
}

SpaceConservationReport check_space_conservation(const SolutionField& field, double expected_mass,
                                                 double tol) {
    SpaceConservationReport report;
    report.expected = expected_mass;
    const auto& grid = field.grid();
    report.samples.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double s = field.mu_x() * field.state(g).sum();
        const double drift = std::abs(s - expected_mass);
        report.max_drift = std::max(report.max_drift, drift);
        if (!(drift <= tol + field.tail_mass(g))) report.passed = false;
        report.samples.push_back({grid[g].t, s, field.tail_mass(g)});
    }
    return report;
}

TimeConservationReport check_time_conservation(const SolutionField& field, SpaceIndex m_lo,
                                               SpaceIndex m_hi, double tol, double agreement_tol,
                                               double max_residual_fraction) {
    if (m_hi < m_lo) throw Error(Errc::kInvalidArgument, "empty branch range");
    TimeConservationReport report;
    const auto& grid = field.grid();
    const double t0 = grid.points().front().t;
    const double t_end = grid.points().back().t;
    const std::size_t last = grid.size() - 1;
    const double total_mass = field.initial_mass();
    report.expected = total_mass / field.k();
    const auto [win_lo, win_hi] = field.overall_window();

    double lo_sum = 0.0;
    double hi_sum = 0.0;
    for (SpaceIndex m = m_lo; m <= m_hi; ++m) {
        if (std::abs(field.initial_mass_up_to(m) - total_mass) > 1e-14 * std::abs(total_mass)) {
            throw Error(Errc::kInvalidArgument,
                        "branch " + std::to_string(m) + " lies inside the initial support");
        }
        BranchIntegral b;
        b.m = m;
        b.integral = field.branch_integral(m, t0, t_end);
        double pending = 0.0;
        for (SpaceIndex j = win_lo; j <= std::min(m, win_hi); ++j) pending += field.value(j, last);
        b.residual = field.mu_x() * pending / field.k();
        if (b.residual > max_residual_fraction * std::abs(report.expected)) {
            throw Error(Errc::kHorizonTooShort,
                        "branch " + std::to_string(m) + " still misses " + shortest(b.residual) +
                            " of " + shortest(report.expected) + " at t_max = " + shortest(t_end));
        }
        b.within_bounds = b.integral >= report.expected - b.residual - tol &&
                          b.integral <= report.expected + tol;
        if (!b.within_bounds) report.passed = false;
        const double completed = b.integral + b.residual;
        if (m == m_lo) {
            lo_sum = hi_sum = completed;
        } else {
            lo_sum = std::min(lo_sum, completed);
            hi_sum = std::max(hi_sum, completed);
        }
        report.branches.push_back(b);
    }
    report.max_pairwise_gap = hi_sum - lo_sum;
    if (!(report.max_pairwise_gap <= agreement_tol)) report.passed = false;
    return report;
}

std::string_view to_string(PdfSections s) noexcept {
    switch (s) {
        case PdfSections::kBoth: return "both";
        case PdfSections::kSpaceOnly: return "space";
        case PdfSections::kTimeOnly: return "time";
        case PdfSections::kNeither: return "neither";
    }
    return "unknown";
}

PdfVerdict check_pdf_conditions(const TransportProblem& problem, double tol) {
    PdfVerdict v;
    const double a_mu_x = problem.A * problem.mu_x;
    v.k_is_one = std::abs(problem.k - 1.0) <= tol;
    v.a_mu_x_is_one = std::abs(a_mu_x - 1.0) <= tol;
    v.a_mu_x_over_k_is_one = std::abs(a_mu_x / problem.k - 1.0) <= tol;
    v.mu_t_below_mu_x = problem.scale.max_graininess() < problem.mu_x;
    v.regressive = check_regressivity(problem.scale, problem.k, problem.mu_x).passed;
    v.space_sections = v.a_mu_x_is_one && v.regressive;
    v.time_sections = v.a_mu_x_over_k_is_one && v.regressive;
    if (v.space_sections && v.time_sections) {
        v.sections = PdfSections::kBoth;
    } else if (v.space_sections) {
        v.sections = PdfSections::kSpaceOnly;
    } else if (v.time_sections) {
        v.sections = PdfSections::kTimeOnly;
    }
    return v;
}

namespace {

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string to_text(const ConservationReport& r) {
    std::string out;
    out += "Conservation report\n";
    out += "  sign:        " + std::string(r.sign_ok ? "ok" : "VIOLATED") + "\n";
    out += "  space sums:  " + std::string(r.space.passed ? "ok" : "FAILED") +
           " (expected " + digits17(r.space.expected) + ", max drift " +
           digits17(r.space.max_drift) + ")\n";
    out += "  time integrals: " + std::string(r.time.passed ? "ok" : "FAILED") + " (expected " +
           digits17(r.time.expected) + ", max pairwise gap " + digits17(r.time.max_pairwise_gap) +
           ")\n";
    for (const auto& b : r.time.branches) {
        out += "    m=" + std::to_string(b.m) + "  integral " + digits17(b.integral) + "  residual " +
               digits17(b.residual) + (b.within_bounds ? "" : "  OUT OF BOUNDS") + "\n";
    }
    out += to_text(r.pdf);
    return out;
}

std::string to_key_values(const ConservationReport& r) {
    std::string out;
    out += "sign_ok=" + std::string(yes_no(r.sign_ok)) + "\n";
    out += "space_passed=" + std::string(yes_no(r.space.passed)) + "\n";
    out += "space_expected=" + digits17(r.space.expected) + "\n";
    out += "max_drift=" + digits17(r.space.max_drift) + "\n";
    for (std::size_t i = 0; i < r.space.samples.size(); ++i) {
        out += "space_sum." + std::to_string(i) + "=" + digits17(r.space.samples[i].t) + "," +
               digits17(r.space.samples[i].sum) + "\n";
    }
    out += "time_passed=" + std::string(yes_no(r.time.passed)) + "\n";
    out += "time_expected=" + digits17(r.time.expected) + "\n";
    out += "time_max_pairwise_gap=" + digits17(r.time.max_pairwise_gap) + "\n";
    for (const auto& b : r.time.branches) {
        out += "time_integral.m" + std::to_string(b.m) + "=" + digits17(b.integral) + "\n";
        out += "time_residual.m" + std::to_string(b.m) + "=" + digits17(b.residual) + "\n";
    }
    out += to_key_values(r.pdf);
    return out;
}

std::string to_text(const PdfVerdict& v) {
    std::string out = "Density conditions\n";
    out += "  k = 1:              " + std::string(yes_no(v.k_is_one)) + "\n";
    out += "  A mu_x = 1:         " + std::string(yes_no(v.a_mu_x_is_one)) + "\n";
    out += "  A mu_x / k = 1:     " + std::string(yes_no(v.a_mu_x_over_k_is_one)) + "\n";
    out += "  sup mu_t < mu_x:    " + std::string(yes_no(v.mu_t_below_mu_x)) + "\n";
    out += "  1 - k mu_t/mu_x > 0: " + std::string(yes_no(v.regressive)) + "\n";
    out += "  density sections:   " + std::string(to_string(v.sections)) + "\n";
    return out;
}

std::string to_key_values(const PdfVerdict& v) {
    std::string out;
    out += "pdf.k_is_one=" + std::string(yes_no(v.k_is_one)) + "\n";
    out += "pdf.a_mu_x_is_one=" + std::string(yes_no(v.a_mu_x_is_one)) + "\n";
    out += "pdf.a_mu_x_over_k_is_one=" + std::string(yes_no(v.a_mu_x_over_k_is_one)) + "\n";
    out += "pdf.mu_t_below_mu_x=" + std::string(yes_no(v.mu_t_below_mu_x)) + "\n";
    out += "pdf.regressive=" + std::string(yes_no(v.regressive)) + "\n";
    out += "pdf.sections=" + std::string(to_string(v.sections)) + "\n";
    return out;
}

}  // namespace semidiscrete
