#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nld/config.hpp"
#include "nld/errors.hpp"
#include "nld/fit.hpp"
#include "nld/kernel.hpp"
#include "nld/runner.hpp"
#include "nld/semigroup.hpp"

using namespace nld;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.txt";
    std::ofstream out(p);
    out << body;
    return p.string();
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(NLDIFF_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("config: minimal admissibility run parses with defaults") {
    const ExperimentConfig cfg = parse_config_text("kernel = gaussian:1.0\n"
                                                   "checks = admissibility\n");
    CHECK(cfg.kernel.family == "gaussian");
    CHECK(cfg.kernel.param == 1.0);
    CHECK(cfg.checks.size() == 1);
    CHECK(cfg.grid.automatic);
    CHECK(cfg.out_dir == "out");
    CHECK_FALSE(cfg.seed.has_value());
}

TEST_CASE("config: rejects unknown keys with the line number") {
    try {
        (void)parse_config_text("kernel = gaussian:1.0\nbogus = 3\nchecks = admissibility\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        const std::string what = e.what();
        CHECK(what.find(":2") != std::string::npos);
        CHECK(what.find("bogus") != std::string::npos);
    }
}

TEST_CASE("config: grid n must be a power of two") {
    try {
        (void)parse_config_text("kernel = gaussian:1.0\ngrid = 1000,40\nchecks = admissibility\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("power of two") != std::string::npos);
    }
}

TEST_CASE("config: dyadic time range expansion") {
    const ExperimentConfig cfg = parse_config_text("kernel = gaussian:1.0\n"
                                                   "initial = box:1.0\n"
                                                   "times = dyadic:4:256\n"
                                                   "checks = decay\n");
    CHECK(cfg.times == std::vector<double>{4, 8, 16, 32, 64, 128, 256});
}

TEST_CASE("config: seed is mandatory for randomized checks") {
    CHECK_THROWS_AS((void)parse_config_text("kernel = gaussian:1.0\nchecks = lemma4\n"),
                    parse_error);
    CHECK_NOTHROW(
        (void)parse_config_text("kernel = gaussian:1.0\nchecks = lemma4\nseed = 7\n"));
}

TEST_CASE("config: checks needing data demand it") {
    // decay without initial datum
    CHECK_THROWS_AS((void)parse_config_text("kernel = gaussian:1.0\ntimes = 1,2\nchecks = decay\n"),
                    parse_error);
    // decay without times
    CHECK_THROWS_AS(
        (void)parse_config_text("kernel = gaussian:1.0\ninitial = box:1.0\nchecks = decay\n"),
        parse_error);
}

TEST_CASE("config: duplicate keys and malformed values rejected") {
    CHECK_THROWS_AS(
        (void)parse_config_text("kernel = gaussian:1.0\nkernel = box:1.0\nchecks = admissibility\n"),
        parse_error);
    CHECK_THROWS_AS(
        (void)parse_config_text("kernel = gaussian:abc\nchecks = admissibility\n"), parse_error);
    CHECK_THROWS_AS(
        (void)parse_config_text("kernel = gaussian:1.0\nchecks = admissibility\ntol.id1 = -1\n"),
        parse_error);
    CHECK_THROWS_AS((void)parse_config_text("kernel = gaussian:1.0\nchecks = nosuch\n"),
                    parse_error);
}

TEST_CASE("runner: smallest run writes a one-row report and passes") {
    const fs::path dir = fresh_dir("nld_cli_smallest");
    ExperimentConfig cfg = parse_config_text("kernel = gaussian:1.0\nchecks = admissibility\n");
    const RunResult result = run_experiment(cfg, dir.string(), std::nullopt);

    CHECK(result.exit_code == 0);
    REQUIRE(result.checks.size() == 1);
    CHECK(result.checks[0].status == "pass");
    CHECK(fs::exists(dir / "manifest.csv"));
    CHECK(fs::exists(dir / "admissibility.csv"));

    // one header + one data row
    std::ifstream in(dir / "admissibility.csv");
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            ++rows;
    CHECK(rows == 2);
}

TEST_CASE("runner: manifest covers exactly the requested checks") {
    const fs::path dir = fresh_dir("nld_cli_manifest");
    ExperimentConfig cfg = parse_config_text("kernel = gaussian:1.0\n"
                                             "checks = oplimit,admissibility\n");
    const RunResult result = run_experiment(cfg, dir.string(), std::nullopt);
    REQUIRE(result.checks.size() == 2);
    // canonical manifest order
    CHECK(result.checks[0].name == "admissibility");
    CHECK(result.checks[1].name == "oplimit");
    CHECK(fs::exists(dir / "oplimit.csv"));
}

TEST_CASE("runner: box kernel fails the admissibility gate with exit 1") {
    const fs::path dir = fresh_dir("nld_cli_boxfail");
    ExperimentConfig cfg = parse_config_text("kernel = box:1.0\nchecks = admissibility\n");
    const RunResult result = run_experiment(cfg, dir.string(), std::nullopt);
    CHECK(result.exit_code == 1);
    CHECK(result.checks[0].status == "fail");
    CHECK(result.checks[0].reason.find("hyp2") != std::string::npos);
}

TEST_CASE("binary: exit codes and flag surface") {
    const fs::path dir = fresh_dir("nld_cli_binary");

    CHECK(run_binary("--list-checks") == 0);
    CHECK(run_binary("--version") == 0);

    const std::string good =
        write_config(dir, "kernel = gaussian:1.0\nchecks = admissibility\n");
    CHECK(run_binary("run " + good + " --out " + (dir / "outA").string()) == 0);

    const std::string bad = write_config(dir, "kernel = gaussian:1.0\nn = oops\n");
    CHECK(run_binary("run " + bad) == 2);

    CHECK(run_binary("run " + (dir / "missing.cfg").string()) == 2);
}

TEST_CASE("emit_plotdata: empty report gives header-only files") {
    const fs::path dir = fresh_dir("nld_cli_plotdata");
    DecayReport empty;
    empty.p = Lp::one;
    emit_plotdata(empty, dir.string());

    std::ifstream lin(dir / "plot_decay_p1.csv");
    std::string line;
    int lines = 0;
    std::string first;
    while (std::getline(lin, line)) {
        if (lines == 0)
            first = line;
        ++lines;
    }
    CHECK(lines == 1);
    CHECK(first == "t,raw,scaled");
    CHECK(fs::exists(dir / "plot_decay_loglog_p1.csv"));
}

TEST_CASE("runner: decay with p = {1,2} writes matching plot files") {
    const fs::path dir = fresh_dir("nld_cli_plots2");
    ExperimentConfig cfg = parse_config_text("kernel = gaussian:1.0\n"
                                             "initial = box:1.0\n"
                                             "times = dyadic:4:32\n"
                                             "p = 1,2\n"
                                             "checks = decay\n");
    (void)run_experiment(cfg, dir.string(), std::nullopt);

    const auto count_rows = [](const fs::path& p) {
        std::ifstream in(p);
        std::string line;
        int rows = 0;
        while (std::getline(in, line))
            ++rows;
        return rows;
    };
    CHECK(count_rows(dir / "plot_decay_p1.csv") == count_rows(dir / "plot_decay_p2.csv"));
    CHECK(count_rows(dir / "plot_decay_p1.csv") == 5); // header + 4 times
    CHECK_FALSE(fs::exists(dir / "plot_decay_pinf.csv"));
}

TEST_CASE("emit_plotdata: log-log columns reproduce the fitted rate") {
    const fs::path dir = fresh_dir("nld_cli_loglog");
    const Kernel kernel = Kernel::gaussian(1.0);
    const Grid g = auto_grid(kernel.second_moment_a(), 64.0, 0.5);
    const Field u0 = make_field(g, [](double x) { return std::abs(x) <= 0.5 ? 1.0 : 0.0; });
    const PropagatorPlan plan = make_plan(kernel, g, u0);

    std::vector<double> times;
    for (double t = 4.0; t <= 64.0; t *= 2.0)
        times.push_back(t);
    const DecayReport rep = decay_sweep(plan, u0, Lp::one, times);
    emit_plotdata(rep, dir.string());

    // refit from the emitted columns (upper half, like the report)
    std::ifstream in(dir / "plot_decay_loglog_p1.csv");
    std::string line;
    std::getline(in, line); // header
    std::vector<double> lt, lr;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        lt.push_back(std::stod(line.substr(0, comma)));
        lr.push_back(std::stod(line.substr(comma + 1)));
    }
    REQUIRE(lt.size() == times.size());
    std::vector<double> xt(lt.begin() + static_cast<long>(lt.size() / 2), lt.end());
    std::vector<double> yr(lr.begin() + static_cast<long>(lr.size() / 2), lr.end());
    const double slope_log10 = fit_linear(xt, yr).slope;
    // slopes are base-invariant
    CHECK(slope_log10 == doctest::Approx(rep.fitted_rate).epsilon(1e-9));
}

TEST_CASE("runner: tail check is skipped when the domain cannot host the radii") {
    const fs::path dir = fresh_dir("nld_cli_tailskip");
    ExperimentConfig cfg = parse_config_text("kernel = gaussian:1.0\n"
                                             "initial = box:1.0\n"
                                             "grid = 256,8\n"
                                             "times = 0.5,1\n"
                                             "p = 1\n"
                                             "checks = tail\n");
    const RunResult result = run_experiment(cfg, dir.string(), std::nullopt);
    REQUIRE(result.checks.size() == 1);
    CHECK(result.checks[0].status == "skipped");
    CHECK(result.checks[0].reason.find("radii") != std::string::npos);
    CHECK(result.exit_code == 1); // a skipped check is not a passed check
}

TEST_CASE("runner: snapshot dumps are three-column text named by time") {
    const fs::path dir = fresh_dir("nld_cli_snapshots");
    ExperimentConfig cfg = parse_config_text("kernel = gaussian:1.0\n"
                                             "initial = box:1.0\n"
                                             "grid = 256,20\n"
                                             "times = 0.5,1\n"
                                             "p = 1\n"
                                             "snapshots = true\n"
                                             "checks = decay\n");
    (void)run_experiment(cfg, dir.string(), std::nullopt);

    CHECK(fs::exists(dir / "snapshot_t=0.5.txt"));
    REQUIRE(fs::exists(dir / "snapshot_t=1.txt"));
    std::ifstream in(dir / "snapshot_t=1.txt");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        double x, u, v;
        std::istringstream cols(line);
        REQUIRE((cols >> x >> u >> v));
        ++rows;
    }
    CHECK(rows == 256);
}

TEST_CASE("initial datum from a field table round-trips through serialization") {
    const fs::path dir = fresh_dir("nld_cli_fieldfile");
    const Grid g = Grid::make(256, 20.0);
    const Field original = make_field(g, [](double x) { return std::exp(-x * x); });
    write_field_table(original, (dir / "u0.txt").string());

    ExperimentConfig cfg = parse_config_text("kernel = gaussian:1.0\n"
                                             "initial = file:" + (dir / "u0.txt").string() +
                                             "\n"
                                             "grid = 256,20\n"
                                             "times = 0.5,1\n"
                                             "p = 1\n"
                                             "checks = oracle-crosscheck\n");
    // the file initial is interpolated back onto the same grid, so the
    // crosscheck behaves exactly like the analytic bump
    const RunResult result = run_experiment(cfg, dir.string(), std::nullopt);
    CHECK(result.exit_code == 0);
}

TEST_CASE("runner: per-check module errors are reported, run continues") {
    const fs::path dir = fresh_dir("nld_cli_checkerr");
    // grid far too small for t = 256: decay fails with a domain error while
    // admissibility still passes
    ExperimentConfig cfg = parse_config_text("kernel = gaussian:1.0\n"
                                             "initial = box:1.0\n"
                                             "grid = 64,5\n"
                                             "times = dyadic:4:256\n"
                                             "p = 1\n"
                                             "checks = admissibility,decay\n");
    const RunResult result = run_experiment(cfg, dir.string(), std::nullopt);
    CHECK(result.exit_code == 1);
    REQUIRE(result.checks.size() == 2);
    CHECK(result.checks[0].status == "pass");
    CHECK(result.checks[1].status == "fail");
    CHECK(!result.checks[1].reason.empty());
    CHECK(fs::exists(dir / "manifest.csv"));
}
