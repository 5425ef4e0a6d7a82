#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace semidiscrete::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitRegressivity = 2;
inline constexpr int kExitConfig = 3;

/// Named file contents, written together once everything has been computed.
using OutputFiles = std::vector<std::pair<std::string, std::string>>;

/// Writes every file to a temporary name in `dir`, then renames them into
/// place. On failure the temporaries are removed and nothing is renamed.
void write_atomically(const std::filesystem::path& dir, const OutputFiles& files);

/// Solves the scenario and renders the requested outputs. Throws
/// ConfigError or semidiscrete::Error.
OutputFiles render_scenario(const ScenarioConfig& config, std::ostream& warnings);
OutputFiles render_convergence(const ConvergenceConfig& config);

struct Overrides {
    std::optional<double> tail_tol;
    std::optional<double> quad_tol;
};

// Each returns the process exit code; diagnostics go to `err`.
int run_scenario(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                 const Overrides& overrides, std::ostream& out, std::ostream& err);
int run_convergence(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                    std::ostream& out, std::ostream& err);
int run_selftest(bool inject_sign_flip, std::ostream& out, std::ostream& err);
int run_dump_config(const std::string& preset_name, std::ostream& out, std::ostream& err);

}  // namespace semidiscrete::cli
