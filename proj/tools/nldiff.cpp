#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nld/config.hpp"
#include "nld/errors.hpp"
#include "nld/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nldiff: nonlocal diffusion experiment runner"};
    app.set_version_flag("--version", nld::version_string());

    bool list_checks = false;
    app.add_flag("--list-checks", list_checks, "List available check names and exit");

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;

    CLI::App* run = app.add_subcommand("run", "Execute the checks described by a config file");
    run->add_option("config", config_path, "Path to a key = value config file")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the config)");
    run->add_option("--seed", seed, "Seed for randomized suites (overrides the config)");

    CLI11_PARSE(app, argc, argv);

    if (list_checks) {
        for (const auto& name : nld::all_check_names())
            std::printf("%s\n", name.c_str());
        return 0;
    }
    if (!run->parsed()) {
        std::fprintf(stderr, "%s\n", app.help().c_str());
        return 2;
    }

    nld::ExperimentConfig cfg;
    try {
        cfg = nld::parse_config_file(config_path);
    } catch (const nld::error& e) {
        // unreadable or malformed config is a configuration error
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    try {
        const nld::RunResult result = nld::run_experiment(cfg, out_dir, seed);
        for (const auto& check : result.checks) {
            std::printf("%-18s %s%s%s\n", check.name.c_str(), check.status.c_str(),
                        check.reason.empty() ? "" : ": ", check.reason.c_str());
        }
        return result.exit_code;
    } catch (const nld::parse_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const nld::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
