#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nld/spectral_grid.hpp"

namespace nld {

// Canonical check names, in manifest order.
const std::vector<std::string>& all_check_names();
bool check_is_randomized(const std::string& name);
bool check_needs_initial(const std::string& name);
bool check_needs_times(const std::string& name);

struct KernelSpec {
    std::string family; // gaussian | box | hat | sampled
    double param = 1.0;
    std::string path; // sampled only
};

struct InitialSpec {
    std::string family; // box | gaussian | hat | file
    double param = 1.0;
    std::string path; // file only
    double center = 0.0;
};

struct GridSpec {
    bool automatic = true;
    int n = 0;
    double half_length = 0.0;
};

struct Tolerances {
    double crosscheck = 1e-6;
    double lemma4_slack = 1e-8;
    double lemma5_slack = 1e-6;
    double id1 = 1e-12;
    double hyp1 = 1e-6;
};

/// One experiment: kernel, initial datum, grid, time samples and the checks
/// to execute. Parsed from flat "key = value" text; unknown keys are
/// rejected with their line number.
struct ExperimentConfig {
    KernelSpec kernel;
    std::optional<InitialSpec> initial;
    GridSpec grid;
    std::vector<double> times;
    std::vector<Lp> p_list = {Lp::one, Lp::two, Lp::inf};
    std::vector<std::string> checks;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    bool snapshots = false;
    int cases = 100;        // randomized suite size
    double oracle_dt = 0.01;
    Tolerances tol;

    // Deterministic echo for the run manifest.
    std::vector<std::string> resolved_lines() const;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "config");
ExperimentConfig parse_config_file(const std::string& path);

} // namespace nld
