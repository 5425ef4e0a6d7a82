#include "run.hpp"

#include <unistd.h>

#include <fstream>
#include <ostream>
#include <sstream>

#include "semidiscrete/checks/suite.hpp"
#include "semidiscrete/conservation.hpp"
#include "semidiscrete/distributions.hpp"
#include "semidiscrete/errors.hpp"
#include "semidiscrete/format.hpp"
#include "semidiscrete/transport.hpp"

namespace semidiscrete::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string field_csv(const SolutionField& field) {
    std::string out = "m,t,u\n";
    for (std::size_t g = 0; g < field.grid().size(); ++g) {
        const std::string t = digits17(field.grid()[g].t);
        const auto& s = field.state(g);
        for (SpaceIndex m = s.lo; m <= s.hi(); ++m) {
            out += std::to_string(m);
            out += ',';
            out += t;
            out += ',';
            out += digits17(s.at(m));
            out += '\n';
        }
    }
    return out;
}

void require_regressive(const TransportProblem& p) {
    const auto report = check_regressivity(p.scale, p.k, p.mu_x);
    if (report.passed) return;
    const auto& f = report.failures.front();
    throw Error(Errc::kCflViolation, "regressivity condition (TS1) 1 - k mu(t) / mu_x > 0 fails at t = " +
                                         shortest(f.t) + " (k = " + shortest(p.k) + ", mu = " + shortest(f.mu) +
                                         ", mu_x = " + shortest(p.mu_x) + ")");
}

int report_error(std::ostream& err, const char* what, int code) {
    err << "error: " << what << "\n";
    return code;
}

}  // namespace

void write_atomically(const fs::path& dir, const OutputFiles& files) {
    fs::create_directories(dir);
    const std::string suffix = ".tmp." + std::to_string(::getpid());
    std::vector<fs::path> temps;
    try {
        for (const auto& [name, content] : files) {
            const fs::path tmp = dir / ("." + name + suffix);
            temps.push_back(tmp);
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            os << content;
            os.close();
            if (!os) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        for (const auto& [name, content] : files) {
            if (fs::is_directory(dir / name)) throw std::runtime_error("'" + (dir / name).string() + "' is a directory");
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& t : temps) fs::remove(t, ec);
        throw;
    }
    std::size_t renamed = 0;
    try {
        for (; renamed < files.size(); ++renamed) fs::rename(temps[renamed], dir / files[renamed].first);
    } catch (...) {
        std::error_code ec;
        for (std::size_t i = 0; i < renamed; ++i) fs::remove(dir / files[i].first, ec);
        for (std::size_t i = renamed; i < temps.size(); ++i) fs::remove(temps[i], ec);
        throw;
    }
}

OutputFiles render_scenario(const ScenarioConfig& config, std::ostream& warnings) {
    const TransportProblem problem = scenario_problem(config);
    try {
        problem.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    const bool nonnegative = problem.nonnegative_initial();
    const auto& req = config.outputs;
    if (!nonnegative && (!req.time_sections.empty() || !req.space_sections.empty())) {
        throw ConfigError("outputs: sections need nonnegative initial data");
    }
    require_regressive(problem);

    const Grid grid = Grid::build(problem.scale, config.h_out);
    const SolutionField field = solve(problem, grid);

    OutputFiles files;
    if (req.field) files.emplace_back("field.csv", field_csv(field));
    for (const SpaceIndex m : req.time_sections) {
        try {
            files.emplace_back("tsec_m" + std::to_string(m) + ".csv", to_csv(time_section(field, m)));
        } catch (const Error& e) {
            throw ConfigError("outputs.time_sections: " + std::string(e.what()));
        }
    }
    for (const double t : req.space_sections) {
        try {
            files.emplace_back("ssec_t" + shortest(t) + ".csv", to_csv(space_section(field, t)));
        } catch (const Error& e) {
            throw ConfigError("outputs.space_sections: " + std::string(e.what()));
        }
    }
    const PdfVerdict verdict = check_pdf_conditions(problem);
    if (req.conservation) {
        if (!nonnegative) {
            warnings << "warning: conservation skipped, initial data has negative values\n";
        } else {
            ConservationReport report;
            report.sign_ok = check_sign(field);
            report.space = check_space_conservation(field, problem.initial_mass(), 1e-10);
            const SpaceIndex m0 = problem.initial_state().hi();
            report.time = check_time_conservation(field, m0, m0 + config.conservation_branches, config.quad_tol,
                                                  2e-8, 1.0);
            report.pdf = verdict;
            if (!report.passed()) warnings << "warning: conservation checks failed, see conservation.txt\n";
            files.emplace_back("conservation.txt", to_text(report));
            files.emplace_back("conservation.kv", to_key_values(report));
        }
    }
    if (req.pdf_check) {
        files.emplace_back("pdf_check.txt", to_text(verdict));
        files.emplace_back("pdf_check.kv", to_key_values(verdict));
    }
    return files;
}

OutputFiles render_convergence(const ConvergenceConfig& config) {
    const double lambda = config.rate * config.target_time;
    for (const std::size_t n : config.steps) {
        // k = rate, mu_x = 1, mu_t = target_time / n
        if (!(lambda / static_cast<double>(n) < 1.0)) {
            throw Error(Errc::kCflViolation, "regressivity condition (TS1) 1 - k mu_t / mu_x > 0 fails for n = " +
                                                 std::to_string(n) + " (k mu_t / mu_x = " +
                                                 shortest(lambda / static_cast<double>(n)) + ")");
        }
    }
    std::string csv = "n,tv,ratio\n";
    double previous = 0.0;
    for (std::size_t i = 0; i < config.steps.size(); ++i) {
        const std::size_t n = config.steps[i];
        const double tv = poisson_limit_distance(n, lambda);
        csv += std::to_string(n) + "," + digits17(tv) + ",";
        if (i > 0) csv += digits17(tv / previous);
        csv += "\n";
        previous = tv;
    }
    return {{"convergence.csv", csv}};
}

int run_scenario(const fs::path& config_path, const fs::path& out_dir, const Overrides& overrides,
                 std::ostream& out, std::ostream& err) {
    try {
        ScenarioConfig config = parse_scenario(read_file(config_path));
        if (overrides.tail_tol) config.tail_tol = *overrides.tail_tol;
        if (overrides.quad_tol) config.quad_tol = *overrides.quad_tol;
        const OutputFiles files = render_scenario(config, err);
        write_atomically(out_dir, files);
        for (const auto& f : files) out << (out_dir / f.first).string() << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        return report_error(err, e.what(), kExitConfig);
    } catch (const Error& e) {
        if (e.code() == Errc::kCflViolation) return report_error(err, e.what(), kExitRegressivity);
        return report_error(err, e.what(), kExitConfig);
    } catch (const std::exception& e) {
        return report_error(err, e.what(), kExitFailure);
    }
}

int run_convergence(const fs::path& config_path, const fs::path& out_dir, std::ostream& out,
                    std::ostream& err) {
    try {
        const ConvergenceConfig config = parse_convergence(read_file(config_path));
        const OutputFiles files = render_convergence(config);
        write_atomically(out_dir, files);
        for (const auto& f : files) out << (out_dir / f.first).string() << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        return report_error(err, e.what(), kExitConfig);
    } catch (const Error& e) {
        if (e.code() == Errc::kCflViolation) return report_error(err, e.what(), kExitRegressivity);
        return report_error(err, e.what(), kExitConfig);
    } catch (const std::exception& e) {
        return report_error(err, e.what(), kExitFailure);
    }
}

int run_selftest(bool inject_sign_flip, std::ostream& out, std::ostream& err) {
    checks::SelftestOptions options;
    options.inject_sign_flip = inject_sign_flip;
    const auto results = checks::run_selftest(options);
    const checks::CheckResult* first_failure = nullptr;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        if (!r.passed && !first_failure) first_failure = &r;
    }
    if (first_failure) {
        err << "selftest failed: " << first_failure->name << ": " << first_failure->detail << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

int run_dump_config(const std::string& preset_name, std::ostream& out, std::ostream& err) {
    const auto config = preset(preset_name);
    if (!config) {
        std::string names;
        for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
        err << "error: preset: unknown preset '" << preset_name << "' (one of " << names << ")\n";
        return kExitConfig;
    }
    out << dump_scenario(*config);
    return kExitOk;
}

}  // namespace semidiscrete::cli
