#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "semidiscrete/transport.hpp"

namespace semidiscrete {

/// Values below this count as sign violations; above it, as summation dust.
inline constexpr double kSignFloor = -1e-14;

/// True iff every stored value is >= kSignFloor.
bool check_sign(const SolutionField& field);

struct SpaceSample {
    double t = 0.0;
    /// S(t) = mu_x * sum_m u(m mu_x, t)
    double sum = 0.0;
    double tail_mass = 0.0;
};

struct SpaceConservationReport {
    bool passed = true;
    double expected = 0.0;
    double max_drift = 0.0;
    std::vector<SpaceSample> samples;
};

/// |S(t) - expected_mass| <= tol + tail_mass(t) at every grid time.
SpaceConservationReport check_space_conservation(const SolutionField& field, double expected_mass,
                                                 double tol);

struct BranchIntegral {
    SpaceIndex m = 0;
    /// Delta integral of u(m mu_x, ·) over [0, t_max].
    double integral = 0.0;
    /// Mass that has not yet passed branch m at t_max, divided by k: the
    /// part of the infinite-horizon integral still missing.
    double residual = 0.0;
    bool within_bounds = true;
};

struct TimeConservationReport {
    bool passed = true;
    /// mu_x * (initial mass) / k, i.e. A mu_x / k for a point mass.
    double expected = 0.0;
    std::vector<BranchIntegral> branches;
    /// Largest pairwise gap between integral + residual across branches.
    double max_pairwise_gap = 0.0;
};

/// For each m in [m_lo, m_hi]: integral in [expected - residual - tol,
/// expected + tol], and integral + residual equal across branches within
/// agreement_tol. Throws kHorizonTooShort when a residual exceeds
/// max_residual_fraction of the expected value. Branches must lie at or
/// above the initial support.
TimeConservationReport check_time_conservation(const SolutionField& field, SpaceIndex m_lo,
                                               SpaceIndex m_hi, double tol,
                                               double agreement_tol = 2e-8,
                                               double max_residual_fraction = 0.1);

enum class PdfSections { kBoth, kSpaceOnly, kTimeOnly, kNeither };

std::string_view to_string(PdfSections s) noexcept;

struct PdfVerdict {
    bool k_is_one = false;
    bool a_mu_x_is_one = false;
    bool a_mu_x_over_k_is_one = false;
    /// sup μ(t) < mu_x, as literally required for both sections at once.
    bool mu_t_below_mu_x = false;
    /// 1 - k μ(t) / mu_x > 0 everywhere.
    bool regressive = false;
    bool space_sections = false;
    bool time_sections = false;
    PdfSections sections = PdfSections::kNeither;
};

/// Which sections are dynamic probability densities for the problem:
/// space sections iff A mu_x = 1 and the scale is regressive; time sections
/// iff A mu_x / k = 1 and the scale is regressive. Both at once iff k = 1,
/// A mu_x = 1 and sup μ < mu_x.
PdfVerdict check_pdf_conditions(const TransportProblem& problem, double tol = 1e-12);

struct ConservationReport {
    bool sign_ok = true;
    SpaceConservationReport space;
    TimeConservationReport time;
    PdfVerdict pdf;
    [[nodiscard]] double max_drift() const noexcept { return space.max_drift; }
    [[nodiscard]] bool passed() const noexcept { return sign_ok && space.passed && time.passed; }
};

std::string to_text(const ConservationReport& report);
/// One key=value per line.
std::string to_key_values(const ConservationReport& report);
std::string to_text(const PdfVerdict& verdict);
std::string to_key_values(const PdfVerdict& verdict);

}  // namespace semidiscrete
