#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "config.hpp"
#include "doctest.h"
#include "run.hpp"

using namespace semidiscrete;
using namespace semidiscrete::cli;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
    try {
        (void)parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    FAIL("expected a ConfigError for: " << text);
    return {};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("semidiscrete_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path write(const std::string& name, const std::string& content) const {
        std::ofstream(path / name) << content;
        return path / name;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("scenario parsing") {
    const auto c = parse_scenario(
        "# stop-start run\n"
        "scale = stopstart(0.5, 0.5, 6)   # six periods\n"
        "k = 1\nA = 2\nmu_x = 0.5\n"
        "initial = [0.25, 0.75]\ninitial_lo = -1\n"
        "t_max = 5.5\nh_out = 0.1\n"
        "outputs = [field, time_sections(0, 2), space_sections(1, 2.5), conservation]\n");
    CHECK(std::get<StopStartScale>(c.scale) == StopStartScale{0.5, 0.5, 6});
    CHECK(c.A == 2.0);
    CHECK(c.initial == std::vector<double>{0.25, 0.75});
    CHECK(c.initial_lo == -1);
    CHECK(c.h_out == 0.1);
    CHECK(c.tail_tol == 1e-12);
    CHECK(c.quad_tol == 1e-10);
    CHECK(c.outputs.field);
    CHECK(c.outputs.time_sections == std::vector<SpaceIndex>{0, 2});
    CHECK(c.outputs.space_sections == std::vector<double>{1.0, 2.5});
    CHECK_FALSE(c.outputs.pdf_check);

    const auto lit = parse_scenario("scale = [[0, 0.5], 1, [2, 2.5]]\nt_max = 2.5\n");
    CHECK(build_scale(lit.scale) == TimeScale({{0, 0.5}, {1, 1}, {2, 2.5}}));
    CHECK(build_scale(parse_scenario("scale = harmonic(3)\nt_max=1\n").scale) == TimeScale::harmonic(3));
}

TEST_CASE("parse errors name the field and constraint") {
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\nk = -1\n") == "k: must be > 0 (got -1)");
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\nmu_x = 0\n") == "mu_x: must be > 0 (got 0)");
    CHECK(config_error("scale = uniform(0.25, 4)\n").find("t_max: required") == 0);
    CHECK(config_error("t_max = 1\n").find("scale: required") == 0);
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = -2\n") == "t_max: must be >= 0 (got -2)");
    CHECK(config_error("scale = uniform(-0.25, 4)\nt_max = 1\n") == "scale.step: must be > 0 (got -0.25)");
    CHECK(config_error("scale = uniform(0.25, 2.5)\nt_max = 1\n") == "scale.n: must be an integer (got 2.5)");
    CHECK(config_error("scale = uniform(0.25)\nt_max = 1\n").find("scale: uniform takes 2") == 0);
    CHECK(config_error("scale = spiral(3)\nt_max = 1\n").find("scale: unknown generator") == 0);
    CHECK(config_error("scale = [[0, 1], 0.5]\nt_max = 1\n").find("scale: ") == 0);
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\nspeed = 3\n").find("speed: unknown key") == 0);
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\nk = 1\nk = 2\n").find("k: duplicate key") == 0);
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\nk = fast\n") == "k: must be a number (got fast)");
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\nk = 1x\n") == "k: invalid number '1x'");
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\noutputs = [plot]\n").find("outputs: unknown output") == 0);
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\ntail_tol = 0\n") == "tail_tol: must be > 0 (got 0)");
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\nh_out = -1\n") == "h_out: must be > 0 (got -1)");
    CHECK(config_error("scale = uniform(0.25, 4)\nt_max = 1\nk 1\n").find("line 3: expected") == 0);
}

TEST_CASE("dump-config round-trips every preset") {
    for (const auto& name : preset_names()) {
        const auto c = preset(name);
        REQUIRE(c);
        const auto text = dump_scenario(*c);
        CHECK(parse_scenario(text) == *c);
        CHECK(dump_scenario(parse_scenario(text)) == text);
    }
    CHECK_FALSE(preset("gaussian"));

    ScenarioConfig odd;
    odd.scale = LiteralScale{{{0.0, 0.1}, {0.30000000000000004, 0.30000000000000004}}};
    odd.initial = {0.1, 1e-300, 2.5};
    odd.initial_lo = -3;
    odd.t_max = 0.2;
    odd.periodic = true;
    odd.quad_tol = 3e-9;
    odd.outputs.space_sections = {0.1};
    CHECK(parse_scenario(dump_scenario(odd)) == odd);

    ConvergenceConfig conv{2.5, {3, 7, 100}, 0.5};
    CHECK(parse_convergence(dump_convergence(conv)) == conv);
}

TEST_CASE("scenario scale honours t_max and periodic extension") {
    auto c = parse_scenario("scale = stopstart(0.5, 0.5, 2)\nt_max = 4.5\nextend = periodic\n");
    CHECK(scenario_scale(c).components().size() == 5);
    c.periodic = false;
    CHECK_THROWS_AS((void)scenario_scale(c), ConfigError);
    c.t_max = 0.8;
    CHECK(scenario_scale(c).t_max() == 0.5);
    c.t_max = 1.2;
    CHECK(scenario_scale(c).t_max() == 1.2);
}

TEST_CASE("solve writes the requested files") {
    TempDir dir;
    const auto cfg = dir.write("s.cfg",
                               "scale = uniform(0.25, 40)\nt_max = 10\n"
                               "outputs = [field, time_sections(0, 3), space_sections(2.5), conservation, pdf_check]\n");
    std::ostringstream out, err;
    REQUIRE(run_scenario(cfg, dir.path / "out", {}, out, err) == kExitOk);
    for (const char* f : {"field.csv", "tsec_m0.csv", "tsec_m3.csv", "ssec_t2.5.csv", "conservation.txt",
                          "conservation.kv", "pdf_check.txt", "pdf_check.kv"}) {
        CHECK(fs::exists(dir.path / "out" / f));
    }
    const auto field = slurp(dir.path / "out" / "field.csv");
    CHECK(field.rfind("m,t,u\n0,0,1\n", 0) == 0);
    CHECK(field.find("\n1,0.25,0.25\n") != std::string::npos);
    CHECK(slurp(dir.path / "out" / "conservation.kv").find("sign_ok=true") != std::string::npos);
    CHECK(slurp(dir.path / "out" / "pdf_check.kv").find("pdf.sections=both") != std::string::npos);

    std::ostringstream out2, err2;
    REQUIRE(run_scenario(cfg, dir.path / "again", {}, out2, err2) == kExitOk);
    for (const auto& entry : fs::directory_iterator(dir.path / "out")) {
        CHECK(slurp(entry.path()) == slurp(dir.path / "again" / entry.path().filename()));
    }
    for (const auto& entry : fs::directory_iterator(dir.path / "out")) {
        CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
    }
}

TEST_CASE("Poisson and binomial scenarios reproduce the closed forms") {
    const auto pois = parse_scenario("scale = [[0, 5]]\nt_max = 5\nh_out = 0.5\n");
    std::ostringstream warn;
    const auto files = render_scenario(pois, warn);
    CHECK(files.empty());

    TransportProblem p = scenario_problem(pois);
    const auto field = solve(p, Grid::build(p.scale, pois.h_out));
    const auto g = field.grid().find(2.0);
    REQUIRE(g);
    CHECK(field.value(3, *g) == doctest::Approx(8.0 / 6.0 * std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("exit codes") {
    TempDir dir;
    std::ostringstream out, err;
    const auto boundary = dir.write("b.cfg", "scale = uniform(1, 5)\nt_max = 5\noutputs = [field]\n");
    CHECK(run_scenario(boundary, dir.path / "b", {}, out, err) == kExitRegressivity);
    CHECK(err.str().find("(TS1)") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.path / "b"));

    std::ostringstream err3;
    const auto bad = dir.write("c.cfg", "scale = uniform(0.5, 5)\nt_max = 5\nA = -1\n");
    CHECK(run_scenario(bad, dir.path / "c", {}, out, err3) == kExitConfig);
    CHECK(err3.str().find("A: must be > 0 (got -1)") != std::string::npos);

    std::ostringstream err4;
    CHECK(run_scenario(dir.path / "missing.cfg", dir.path / "d", {}, out, err4) == kExitConfig);

    std::ostringstream err5;
    const auto off_grid = dir.write("e.cfg", "scale = uniform(0.5, 5)\nt_max = 2.5\noutputs = [field, space_sections(0.7)]\n");
    CHECK(run_scenario(off_grid, dir.path / "e", {}, out, err5) == kExitConfig);
    CHECK(err5.str().find("outputs.space_sections") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.path / "e"));

    std::ostringstream err6;
    const auto conv = dir.write("f.cfg", "rate = 1\nsteps = [1, 4]\n");
    CHECK(run_convergence(conv, dir.path / "f", out, err6) == kExitRegressivity);
}

TEST_CASE("negative initial data") {
    std::ostringstream warn;
    auto c = parse_scenario("scale = [[0, 3]]\nt_max = 3\ninitial = [1, -0.5]\noutputs = [field, conservation]\n");
    const auto files = render_scenario(c, warn);
    CHECK(files.size() == 1);
    CHECK(warn.str().find("conservation skipped") != std::string::npos);

    c.outputs.time_sections = {0};
    CHECK_THROWS_AS((void)render_scenario(c, warn), ConfigError);
}

TEST_CASE("tolerance overrides") {
    TempDir dir;
    const auto cfg = dir.write("s.cfg", "scale = [[0, 20]]\nt_max = 20\noutputs = [field]\n");
    std::ostringstream out, err;
    Overrides loose;
    loose.tail_tol = 1e-3;
    REQUIRE(run_scenario(cfg, dir.path / "loose", loose, out, err) == kExitOk);
    REQUIRE(run_scenario(cfg, dir.path / "tight", {}, out, err) == kExitOk);
    CHECK(fs::file_size(dir.path / "loose" / "field.csv") < fs::file_size(dir.path / "tight" / "field.csv"));
}

TEST_CASE("convergence study") {
    const auto files = render_convergence(parse_convergence("rate = 1\nsteps = [4, 8, 16, 32, 64, 128, 256, 512, 1024]\n"));
    REQUIRE(files.size() == 1);
    std::istringstream csv(files[0].second);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "n,tv,ratio");
    double previous = 1.0, first = 0.0, last = 0.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double tv = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(tv < previous);
        if (rows == 0) {
            first = tv;
            CHECK(c2 + 1 == line.size());
        } else {
            CHECK(std::stod(line.substr(c2 + 1)) == doctest::Approx(tv / previous));
        }
        previous = last = tv;
        ++rows;
    }
    CHECK(rows == 9);
    CHECK(first / last > 100.0);

    const auto single = render_convergence(parse_convergence("steps = [10]\n"));
    CHECK(std::count(single[0].second.begin(), single[0].second.end(), '\n') == 2);
}

TEST_CASE("atomic write leaves nothing behind on failure") {
    TempDir dir;
    const fs::path blocked = dir.path / "blocked";
    fs::create_directories(blocked / "b.csv");  // a directory where a file should go
    OutputFiles files{{"a.csv", "x\n"}, {"b.csv", "y\n"}};
    CHECK_THROWS((void)write_atomically(blocked, files));
    CHECK_FALSE(fs::exists(blocked / "a.csv"));
    std::size_t leftovers = 0;
    for (const auto& e : fs::directory_iterator(blocked)) leftovers += e.path().filename() != "b.csv";
    CHECK(leftovers == 0);
}

TEST_CASE("selftest verdicts") {
    std::ostringstream out, err;
    CHECK(run_selftest(true, out, err) == kExitFailure);
    CHECK(err.str().find("sign conservation") != std::string::npos);
}

TEST_CASE("dump-config verb") {
    std::ostringstream out, err;
    CHECK(run_dump_config("bernoulli", out, err) == kExitOk);
    CHECK(out.str().find("scale = uniform(0.25, 160)") != std::string::npos);
    CHECK(run_dump_config("nope", out, err) == kExitConfig);
}
