#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "run.hpp"

int main(int argc, char** argv) {
    namespace cli = semidiscrete::cli;

    CLI::App app{"Semidiscrete transport on time scales: scenario runner"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    std::string config_path;
    cli::Overrides overrides;
    double tail_tol = 0.0;
    double quad_tol = 0.0;

    auto* solve = app.add_subcommand("solve", "Solve a scenario config and write CSV outputs");
    solve->add_option("config", config_path, "Scenario config file")->required();
    solve->add_option("--out-dir", out_dir, "Output directory");
    auto* tail_opt = solve->add_option("--tail-tol", tail_tol, "Override the spatial truncation tolerance")
                         ->check(CLI::PositiveNumber);
    auto* quad_opt = solve->add_option("--quad-tol", quad_tol, "Override the quadrature tolerance")
                         ->check(CLI::PositiveNumber);

    auto* converge = app.add_subcommand("converge", "Binomial-to-Poisson convergence study");
    converge->add_option("config", config_path, "Convergence config file")->required();
    converge->add_option("--out-dir", out_dir, "Output directory");

    bool inject = false;
    auto* selftest = app.add_subcommand("selftest", "Run the oracle and conservation suite");
    selftest->add_flag("--inject-sign-flip", inject)->group("");

    std::string preset_name;
    auto* dump = app.add_subcommand("dump-config", "Print a preset scenario config");
    dump->add_option("preset", preset_name, "poisson, bernoulli, harmonic or stopstart")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitConfig;
    }

    if (*solve) {
        if (*tail_opt) overrides.tail_tol = tail_tol;
        if (*quad_opt) overrides.quad_tol = quad_tol;
        return cli::run_scenario(config_path, out_dir, overrides, std::cout, std::cerr);
    }
    if (*converge) return cli::run_convergence(config_path, out_dir, std::cout, std::cerr);
    if (*selftest) return cli::run_selftest(inject, std::cout, std::cerr);
    return cli::run_dump_config(preset_name, std::cout, std::cerr);
}
