#pragma once

// Scenario files: one `key = value` per line, `#` starts a comment. Values
// are numbers, bare words, bracketed lists, or calls `name(arg, ...)`.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semidiscrete/time_scale.hpp"
#include "semidiscrete/transport.hpp"

namespace semidiscrete::cli {

/// Parse or validation failure; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LiteralScale {
    std::vector<Component> components;
    friend bool operator==(const LiteralScale&, const LiteralScale&) = default;
};
struct UniformScale {
    double step = 0.0;
    std::size_t n = 0;
    friend bool operator==(const UniformScale&, const UniformScale&) = default;
};
struct StopStartScale {
    double on = 0.0;
    double off = 0.0;
    std::size_t n = 0;
    friend bool operator==(const StopStartScale&, const StopStartScale&) = default;
};
struct HarmonicScale {
    std::size_t n = 0;
    friend bool operator==(const HarmonicScale&, const HarmonicScale&) = default;
};

using ScaleSpec = std::variant<LiteralScale, UniformScale, StopStartScale, HarmonicScale>;

TimeScale build_scale(const ScaleSpec& spec);
std::string to_config_value(const ScaleSpec& spec);

struct OutputRequest {
    bool field = false;
    std::vector<SpaceIndex> time_sections;
    std::vector<double> space_sections;
    bool conservation = false;
    bool pdf_check = false;
    friend bool operator==(const OutputRequest&, const OutputRequest&) = default;
};

struct ScenarioConfig {
    ScaleSpec scale = UniformScale{0.25, 60};
    bool periodic = false;
    double k = 1.0;
    double A = 1.0;
    double mu_x = 1.0;
    /// Empty means a point mass A at m = 0.
    std::vector<double> initial;
    SpaceIndex initial_lo = 0;
    double t_max = 0.0;
    std::optional<double> h_out;
    double tail_tol = kDefaultTailTol;
    double quad_tol = kDefaultQuadTol;
    SpaceIndex conservation_branches = 10;
    OutputRequest outputs;
    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

ScenarioConfig parse_scenario(std::string_view text);
std::string dump_scenario(const ScenarioConfig& config);

/// Time scale restricted (or periodically extended) to t_max. Throws
/// ConfigError when t_max lies beyond a non-periodic scale.
TimeScale scenario_scale(const ScenarioConfig& config);
TransportProblem scenario_problem(const ScenarioConfig& config);

struct ConvergenceConfig {
    double rate = 1.0;
    std::vector<std::size_t> steps;
    double target_time = 1.0;
    friend bool operator==(const ConvergenceConfig&, const ConvergenceConfig&) = default;
};

ConvergenceConfig parse_convergence(std::string_view text);
std::string dump_convergence(const ConvergenceConfig& config);

/// Preset scenarios: poisson, bernoulli, harmonic, stopstart.
std::optional<ScenarioConfig> preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace semidiscrete::cli
