#include "nld/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nld/csv.hpp"
#include "nld/errors.hpp"

namespace nld {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw parse_error(where + ": trailing characters after number '" + s + "'");
        return v;
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception&) {
        throw parse_error(where + ": expected a number, got '" + s + "'");
    }
}

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

} // namespace

const std::vector<std::string>& all_check_names() {
    static const std::vector<std::string> names = {
        "admissibility", "decay",  "lemma1", "lemma2",      "lemma4",          "lemma5",
        "id1",           "tail",   "oplimit", "deltasource", "oracle-crosscheck"};
    return names;
}

bool check_is_randomized(const std::string& name) {
    return name == "lemma4" || name == "lemma5" || name == "id1";
}

bool check_needs_initial(const std::string& name) {
    return name == "decay" || name == "lemma1" || name == "lemma2" || name == "tail" ||
           name == "deltasource" || name == "oracle-crosscheck";
}

bool check_needs_times(const std::string& name) {
    return name == "decay" || name == "lemma1" || name == "lemma2" || name == "tail";
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    bool have_kernel = false, have_checks = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parse_error(where + ": empty key or value");
        if (!seen.insert(key).second)
            throw parse_error(where + ": duplicate key '" + key + "'");

        if (key == "kernel") {
            const auto parts = split(value, ':');
            if (parts.empty() || parts.size() > 2)
                throw parse_error(where + ": kernel must be family:parameter or sampled:path");
            cfg.kernel.family = parts[0];
            if (cfg.kernel.family == "sampled") {
                if (parts.size() != 2)
                    throw parse_error(where + ": sampled kernel needs a table path");
                cfg.kernel.path = parts[1];
            } else if (cfg.kernel.family == "gaussian" || cfg.kernel.family == "box" ||
                       cfg.kernel.family == "hat") {
                cfg.kernel.param = parts.size() == 2 ? parse_double(parts[1], where) : 1.0;
                if (!(cfg.kernel.param > 0.0))
                    throw parse_error(where + ": kernel parameter must be positive");
            } else {
                throw parse_error(where + ": unknown kernel family '" + parts[0] + "'");
            }
            have_kernel = true;
        } else if (key == "initial") {
            const auto parts = split(value, ':');
            InitialSpec init;
            init.family = parts.empty() ? "" : parts[0];
            if (init.family == "file") {
                if (parts.size() != 2)
                    throw parse_error(where + ": initial file needs a path");
                init.path = parts[1];
            } else if (init.family == "box" || init.family == "gaussian" ||
                       init.family == "hat") {
                if (parts.size() > 2)
                    throw parse_error(where + ": initial must be family:parameter");
                init.param = parts.size() == 2 ? parse_double(parts[1], where) : 1.0;
                if (!(init.param > 0.0))
                    throw parse_error(where + ": initial parameter must be positive");
            } else {
                throw parse_error(where + ": unknown initial datum '" + value + "'");
            }
            if (cfg.initial)
                init.center = cfg.initial->center;
            cfg.initial = init;
        } else if (key == "initial_center") {
            const double c = parse_double(value, where);
            if (cfg.initial)
                cfg.initial->center = c;
            else {
                InitialSpec init;
                init.family = "";
                init.center = c;
                cfg.initial = init;
            }
        } else if (key == "grid") {
            if (value == "auto") {
                cfg.grid.automatic = true;
            } else {
                const auto parts = split(value, ',');
                if (parts.size() != 2)
                    throw parse_error(where + ": grid must be 'auto' or 'n,L'");
                const double nd = parse_double(parts[0], where);
                const long n = std::lround(nd);
                if (static_cast<double>(n) != nd || !is_power_of_two(n) || n < 16)
                    throw parse_error(where + ": grid n must be a power of two >= 16");
                const double L = parse_double(parts[1], where);
                if (!(L > 0.0))
                    throw parse_error(where + ": grid half length must be positive");
                cfg.grid.automatic = false;
                cfg.grid.n = static_cast<int>(n);
                cfg.grid.half_length = L;
            }
        } else if (key == "times") {
            if (value.rfind("dyadic:", 0) == 0) {
                const auto parts = split(value.substr(7), ':');
                if (parts.size() != 2)
                    throw parse_error(where + ": times must be dyadic:lo:hi");
                const double lo = parse_double(parts[0], where);
                const double hi = parse_double(parts[1], where);
                if (!(lo > 0.0) || !(hi >= lo))
                    throw parse_error(where + ": dyadic range needs 0 < lo <= hi");
                for (double t = lo; t <= hi * (1.0 + 1e-12); t *= 2.0)
                    cfg.times.push_back(t);
            } else {
                for (const auto& item : split(value, ',')) {
                    const double t = parse_double(item, where);
                    if (!(t > 0.0))
                        throw parse_error(where + ": times must be positive");
                    cfg.times.push_back(t);
                }
                if (!std::is_sorted(cfg.times.begin(), cfg.times.end()))
                    throw parse_error(where + ": times must be ascending");
            }
        } else if (key == "p") {
            cfg.p_list.clear();
            for (const auto& item : split(value, ','))
                cfg.p_list.push_back(lp_from_string(item));
        } else if (key == "checks") {
            cfg.checks.clear();
            if (value == "all") {
                cfg.checks = all_check_names();
            } else {
                std::set<std::string> requested;
                for (const auto& item : split(value, ',')) {
                    const auto& known = all_check_names();
                    if (std::find(known.begin(), known.end(), item) == known.end())
                        throw parse_error(where + ": unknown check '" + item + "'");
                    requested.insert(item);
                }
                // Canonical order keeps the manifest deterministic.
                for (const auto& name : all_check_names())
                    if (requested.count(name))
                        cfg.checks.push_back(name);
            }
            have_checks = true;
        } else if (key == "seed") {
            try {
                cfg.seed = std::stoull(value);
            } catch (const std::exception&) {
                throw parse_error(where + ": seed must be an unsigned integer");
            }
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "snapshots") {
            if (value == "true")
                cfg.snapshots = true;
            else if (value == "false")
                cfg.snapshots = false;
            else
                throw parse_error(where + ": snapshots must be true or false");
        } else if (key == "cases") {
            const double nd = parse_double(value, where);
            if (nd < 1 || nd != std::floor(nd))
                throw parse_error(where + ": cases must be a positive integer");
            cfg.cases = static_cast<int>(nd);
        } else if (key == "oracle_dt") {
            cfg.oracle_dt = parse_double(value, where);
            if (!(cfg.oracle_dt > 0.0) || cfg.oracle_dt > 0.1)
                throw parse_error(where + ": oracle_dt must lie in (0, 0.1]");
        } else if (key.rfind("tol.", 0) == 0) {
            const double v = parse_double(value, where);
            if (!(v > 0.0))
                throw parse_error(where + ": tolerances must be positive");
            const std::string which = key.substr(4);
            if (which == "crosscheck")
                cfg.tol.crosscheck = v;
            else if (which == "lemma4_slack")
                cfg.tol.lemma4_slack = v;
            else if (which == "lemma5_slack")
                cfg.tol.lemma5_slack = v;
            else if (which == "id1")
                cfg.tol.id1 = v;
            else if (which == "hyp1")
                cfg.tol.hyp1 = v;
            else
                throw parse_error(where + ": unknown tolerance '" + key + "'");
        } else {
            throw parse_error(where + ": unknown key '" + key + "'");
        }
    }

    if (!have_kernel)
        throw parse_error(origin + ": missing required key 'kernel'");
    if (!have_checks || cfg.checks.empty())
        throw parse_error(origin + ": missing required key 'checks'");
    if (cfg.initial && cfg.initial->family.empty())
        throw parse_error(origin + ": initial_center given without an initial datum");

    for (const auto& name : cfg.checks) {
        if (check_is_randomized(name) && !cfg.seed)
            throw parse_error(origin + ": seed is mandatory when randomized check '" + name +
                              "' is selected");
        if (check_needs_initial(name) && !cfg.initial)
            throw parse_error(origin + ": check '" + name + "' needs an initial datum");
        if (check_needs_times(name) && cfg.times.empty())
            throw parse_error(origin + ": check '" + name + "' needs a time list");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::vector<std::string> ExperimentConfig::resolved_lines() const {
    std::vector<std::string> lines;
    {
        std::string k = "kernel = " + kernel.family;
        if (kernel.family == "sampled")
            k += ":" + kernel.path;
        else
            k += ":" + format_double(kernel.param);
        lines.push_back(k);
    }
    if (initial) {
        std::string i = "initial = " + initial->family;
        if (initial->family == "file")
            i += ":" + initial->path;
        else
            i += ":" + format_double(initial->param);
        lines.push_back(i);
        lines.push_back("initial_center = " + format_double(initial->center));
    }
    if (grid.automatic) {
        lines.push_back("grid = auto");
    } else {
        lines.push_back("grid = " + std::to_string(grid.n) + "," +
                        format_double(grid.half_length));
    }
    if (!times.empty()) {
        std::string t = "times = ";
        for (std::size_t i = 0; i < times.size(); ++i)
            t += (i ? "," : "") + format_double(times[i]);
        lines.push_back(t);
    }
    {
        std::string p = "p = ";
        for (std::size_t i = 0; i < p_list.size(); ++i)
            p += (i ? "," : "") + to_string(p_list[i]);
        lines.push_back(p);
    }
    {
        std::string c = "checks = ";
        for (std::size_t i = 0; i < checks.size(); ++i)
            c += (i ? "," : "") + checks[i];
        lines.push_back(c);
    }
    if (seed)
        lines.push_back("seed = " + std::to_string(*seed));
    // out_dir is run placement, not experiment identity; echoing it would
    // break byte-identical reruns into different directories.
    lines.push_back(std::string("snapshots = ") + (snapshots ? "true" : "false"));
    lines.push_back("cases = " + std::to_string(cases));
    lines.push_back("oracle_dt = " + format_double(oracle_dt));
    lines.push_back("tol.crosscheck = " + format_double(tol.crosscheck));
    lines.push_back("tol.lemma4_slack = " + format_double(tol.lemma4_slack));
    lines.push_back("tol.lemma5_slack = " + format_double(tol.lemma5_slack));
    lines.push_back("tol.id1 = " + format_double(tol.id1));
    lines.push_back("tol.hyp1 = " + format_double(tol.hyp1));
    return lines;
}

} // namespace nld
