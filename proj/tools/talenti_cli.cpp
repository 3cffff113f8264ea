// Batch driver: JSON config in, CSV/JSON reports out.
//
// Subcommands: solve-radial, compare, sweep, check-space.
// Exit codes: 0 success/PASS, 2 config error, 3 numerical failure,
//             4 inadmissible space.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "talenti/comparison.hpp"
#include "talenti/mesh.hpp"
#include "talenti/model_space.hpp"
#include "talenti/radial_solver.hpp"
#include "talenti/rigidity_lab.hpp"
#include "talenti/weighted_space.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInadmissible = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
        }
    }
    for (const std::string& k : required) {
        if (!j.contains(k)) {
            throw ConfigError(where + ": missing key '" + k + "'");
        }
    }
}

double require_number(const json& j, const std::string& where,
                      const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ConfigError(where + ": '" + key + "' must be a number");
    }
    return j[key].get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
        throw ConfigError("'" + key + "' must be a number");
    }
    return j[key].get<double>();
}

talenti::WeightedHalfLine parse_space(const json& j) {
    require_keys(j, "space", {"family", "N", "params"}, {"family", "N"});
    const std::string family = j.value("family", "");
    const double N = require_number(j, "space", "N");
    const json params = j.value("params", json::object());
    if (family == "model") {
        require_keys(params, "space.params", {}, {});
        return talenti::WeightedHalfLine::model(N);
    }
    if (family == "cone") {
        require_keys(params, "space.params", {"c"}, {"c"});
        return talenti::WeightedHalfLine::cone(
            N, require_number(params, "space.params", "c"));
    }
    if (family == "perturbed_cone") {
        require_keys(params, "space.params", {"eps"}, {"eps"});
        return talenti::WeightedHalfLine::perturbed_cone(
            N, require_number(params, "space.params", "eps"));
    }
    if (family == "bump_cone") {
        // h(t) = c t^{N-1} (1 + a e^{-t}); fails CD(0,N) for a > 0.
        require_keys(params, "space.params", {"c", "a"}, {"c", "a"});
        const double c = require_number(params, "space.params", "c");
        const double a = require_number(params, "space.params", "a");
        if (!(c > 0.0)) throw ConfigError("bump_cone: c must be > 0");
        return talenti::WeightedHalfLine::from_density(
            N, "bump_cone",
            [c, a, N](double t) {
                return c * std::pow(t, N - 1.0) * (1.0 + a * std::exp(-t));
            },
            c / (N * talenti::omega_n(N)));
    }
    throw ConfigError("space: unknown family '" + family + "'");
}

talenti::RadialDatum parse_radial_datum(const json& j) {
    require_keys(j, "f", {"kind", "value", "path"}, {"kind"});
    const std::string kind = j.value("kind", "");
    if (kind == "constant") {
        return talenti::RadialDatum::constant(number_or(j, "value", 1.0));
    }
    if (kind == "csv") {
        if (!j.contains("path") || !j["path"].is_string()) {
            throw ConfigError("f: csv datum needs a 'path' string");
        }
        return talenti::RadialDatum::from_csv_file(j["path"].get<std::string>());
    }
    throw ConfigError("f: unknown kind '" + kind + "'");
}

std::function<double(double, double)> parse_planar_datum(const json& j) {
    require_keys(j, "f",
                 {"kind", "value", "x0", "y0", "width", "amplitude"},
                 {"kind"});
    const std::string kind = j.value("kind", "");
    if (kind == "constant") {
        const double c = number_or(j, "value", 1.0);
        return [c](double, double) { return c; };
    }
    if (kind == "offset_bump") {
        const double x0 = number_or(j, "x0", 0.3);
        const double y0 = number_or(j, "y0", 0.0);
        const double w = number_or(j, "width", 0.2);
        const double a = number_or(j, "amplitude", 1.0);
        if (!(w > 0.0)) throw ConfigError("f: bump width must be > 0");
        return [x0, y0, w, a](double x, double y) {
            const double dx = x - x0, dy = y - y0;
            return a * std::exp(-(dx * dx + dy * dy) / (w * w));
        };
    }
    throw ConfigError("f: unknown kind '" + kind + "'");
}

talenti::Domain parse_domain(const json& j) {
    require_keys(j, "domain", {"shape", "R", "theta", "L", "r_inner"},
                 {"shape"});
    const std::string shape = j.value("shape", "");
    if (shape == "disk") {
        return talenti::Domain::disk(require_number(j, "domain", "R"));
    }
    if (shape == "sector") {
        return talenti::Domain::sector(require_number(j, "domain", "R"),
                                       require_number(j, "domain", "theta"));
    }
    if (shape == "square") {
        return talenti::Domain::square(require_number(j, "domain", "L"));
    }
    if (shape == "annulus") {
        return talenti::Domain::annulus(
            require_number(j, "domain", "r_inner"),
            require_number(j, "domain", "R"));
    }
    throw ConfigError("domain: unknown shape '" + shape + "'");
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << body;
}

int cmd_solve_radial(const json& cfg, const std::filesystem::path& out_dir,
                     bool verbose) {
    require_keys(cfg, "config",
                 {"space", "R", "p", "f", "output_prefix"},
                 {"space", "R", "p", "f"});
    const talenti::WeightedHalfLine space = parse_space(cfg.at("space"));
    const double R = require_number(cfg, "config", "R");
    const double p = require_number(cfg, "config", "p");
    if (!(p > 1.0)) throw ConfigError("p must be > 1");
    if (!(R > 0.0)) throw ConfigError("R must be > 0");
    const talenti::RadialDatum f = parse_radial_datum(cfg.at("f"));
    const std::string prefix = cfg.value("output_prefix", "radial");

    const talenti::RadialSolution sol =
        talenti::solve_radial_poisson(space, R, f, p);
    sol.export_csv((out_dir / (prefix + "_solution.csv")).string());

    json stats;
    stats["space"] = space.family_id();
    stats["N"] = space.dimension();
    stats["R"] = R;
    stats["p"] = p;
    stats["v0"] = sol.value_at(0.0);
    stats["grid_points"] = sol.rho.size();
    write_file(out_dir / (prefix + "_stats.json"), stats.dump(2) + "\n");
    if (verbose) {
        std::cout << "solve-radial: v(0) = " << sol.value_at(0.0) << "\n";
    }
    return kExitOk;
}

int cmd_compare(const json& cfg, const std::filesystem::path& out_dir,
                bool verbose) {
    require_keys(cfg, "config", {"instance", "p", "output_prefix"},
                 {"instance", "p"});
    const double p = require_number(cfg, "config", "p");
    if (!(p > 1.0)) throw ConfigError("p must be > 1");
    const std::string prefix = cfg.value("output_prefix", "compare");
    const json& inst = cfg.at("instance");

    talenti::CompareOptions opts;
    opts.p = p;
    talenti::ComparisonReport report;

    require_keys(inst, "instance",
                 {"kind", "domain", "target_h", "avr", "f", "space", "R",
                  "f_nonincreasing", "name"},
                 {"kind", "f"});
    const std::string kind = inst.value("kind", "");
    if (kind == "fem") {
        if (!inst.contains("domain")) {
            throw ConfigError("instance: fem kind needs 'domain'");
        }
        const talenti::Domain domain = parse_domain(inst.at("domain"));
        const double target_h = number_or(inst, "target_h", 0.05);
        const double avr = number_or(inst, "avr", 1.0);
        report = talenti::compare_fem_instance(
            domain, target_h, parse_planar_datum(inst.at("f")), avr, opts,
            inst.value("name", ""));
    } else if (kind == "radial") {
        if (!inst.contains("space") || !inst.contains("R")) {
            throw ConfigError("instance: radial kind needs 'space' and 'R'");
        }
        report = talenti::compare_radial_instance(
            parse_space(inst.at("space")),
            require_number(inst, "instance", "R"),
            parse_radial_datum(inst.at("f")),
            inst.value("f_nonincreasing", true), opts,
            inst.value("name", ""));
    } else {
        throw ConfigError("instance: unknown kind '" + kind + "'");
    }

    write_file(out_dir / (prefix + "_report.json"),
               report.to_json() + "\n");
    write_file(out_dir / (prefix + "_summary.csv"),
               talenti::ComparisonReport::csv_header() + "\n" +
                   report.csv_row() + "\n");
    if (verbose) {
        std::cout << "compare: margin = " << report.talenti_margin
                  << ", deficit = " << report.talenti_deficit
                  << ", equality = " << report.equality_detected << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const json& cfg, const std::filesystem::path& out_dir,
              bool verbose) {
    require_keys(cfg, "config",
                 {"family", "params", "N", "p", "R", "proxy_horizon",
                  "record_timings", "output_prefix"},
                 {"family", "params"});
    talenti::SweepSpec spec;
    spec.family = cfg.value("family", "");
    if (!cfg.at("params").is_array()) {
        throw ConfigError("params must be an array of numbers");
    }
    for (const auto& v : cfg.at("params")) {
        if (!v.is_number()) throw ConfigError("params must be numbers");
        spec.params.push_back(v.get<double>());
    }
    spec.N = number_or(cfg, "N", 2.0);
    spec.p = number_or(cfg, "p", 2.0);
    spec.R = number_or(cfg, "R", 1.0);
    spec.proxy_horizon = number_or(cfg, "proxy_horizon", 10.0);
    spec.record_timings = cfg.value("record_timings", false);
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const std::string prefix = cfg.value("output_prefix", "sweep");

    const talenti::SweepResult result = talenti::run_family_sweep(spec);
    write_file(out_dir / (prefix + ".csv"),
               talenti::SweepResult::csv_header() + "\n" +
                   result.csv_rows());
    write_file(out_dir / (prefix + "_verdict.json"),
               result.verdict_json() + "\n");
    if (verbose) {
        std::cout << "sweep: " << result.verdict_detail << "\n";
    }
    return result.pass ? kExitOk : kExitNumerical;
}

int cmd_check_space(const json& cfg, const std::filesystem::path& out_dir,
                    bool verbose) {
    require_keys(cfg, "config",
                 {"space", "grid_step", "horizon", "output_prefix"},
                 {"space"});
    const talenti::WeightedHalfLine space = parse_space(cfg.at("space"));
    const double grid_step = number_or(cfg, "grid_step", 0.01);
    const double horizon = number_or(cfg, "horizon", 20.0);
    const std::string prefix = cfg.value("output_prefix", "cd_check");

    const talenti::CdCheckReport report =
        talenti::check_cd0n(space, grid_step, horizon);
    json j;
    j["family"] = space.family_id();
    j["N"] = space.dimension();
    j["admissible"] = report.admissible;
    j["worst_second_difference"] = report.worst_second_difference;
    j["grid_step"] = report.grid_step;
    j["horizon"] = report.horizon;
    j["tolerance"] = report.tolerance;
    write_file(out_dir / (prefix + ".json"), j.dump(2) + "\n");
    if (verbose) {
        std::cout << "check-space: admissible = " << report.admissible
                  << "\n";
    }
    return report.admissible ? kExitOk : kExitInadmissible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetrization-comparison toolkit for weighted model "
                 "spaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path = ".";
    bool verbose = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")
            ->required();
        sub->add_option("--out", out_path, "output directory");
        sub->add_flag("--verbose", verbose, "chatty progress output");
    };

    CLI::App* solve_radial = app.add_subcommand(
        "solve-radial", "solve the radial Poisson problem by quadrature");
    CLI::App* compare = app.add_subcommand(
        "compare", "full comparison pipeline for one instance");
    CLI::App* sweep = app.add_subcommand(
        "sweep", "deficit vs cone-distance sweep over a family");
    CLI::App* check_space = app.add_subcommand(
        "check-space", "CD(0,N) admissibility check for a weighted space");
    for (CLI::App* sub : {solve_radial, compare, sweep, check_space}) {
        add_common(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const json cfg = load_config(config_path);
        std::filesystem::path out_dir(out_path);
        std::filesystem::create_directories(out_dir);

        if (solve_radial->parsed()) {
            return cmd_solve_radial(cfg, out_dir, verbose);
        }
        if (compare->parsed()) return cmd_compare(cfg, out_dir, verbose);
        if (sweep->parsed()) return cmd_sweep(cfg, out_dir, verbose);
        if (check_space->parsed()) {
            return cmd_check_space(cfg, out_dir, verbose);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const talenti::InadmissibleSpaceError& e) {
        std::cerr << "inadmissible space: " << e.what() << "\n";
        return kExitInadmissible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
