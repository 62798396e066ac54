#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rilab/clothesline.hpp"
#include "rilab/config.hpp"
#include "rilab/experiments.hpp"
#include "rilab/geometry.hpp"
#include "rilab/green.hpp"
#include "rilab/interlacements.hpp"
#include "rilab/potential.hpp"
#include "rilab/report.hpp"

namespace {

using namespace rilab;

constexpr const char *kVersion = "0.1.0";

std::vector<Pt> parse_points(const std::string &spec, int d) {
    std::vector<Pt> out;
    std::stringstream groups(spec);
    std::string group;
    while (std::getline(groups, group, ';')) {
        if (group.empty()) continue;
        Pt p{};
        std::stringstream coords(group);
        std::string c;
        int i = 0;
        while (std::getline(coords, c, ',')) {
            if (i >= d) throw CLI::ValidationError("points", "too many coordinates in '" + group + "'");
            p.c[i++] = std::stoi(c);
        }
        if (i != d) throw CLI::ValidationError("points", "expected " + std::to_string(d) +
                                                             " coordinates in '" + group + "'");
        out.push_back(p);
    }
    if (out.empty()) throw CLI::ValidationError("points", "no points given");
    return out;
}

// every subcommand takes the flat configuration: a file, then key=value
// overrides, then the dedicated flags (which win)
struct ConfigArgs {
    std::string file;
    std::vector<std::string> sets;
};

void add_config_options(CLI::App *app, ConfigArgs &args) {
    app->add_option("--config", args.file, "key=value configuration file");
    app->add_option("--set", args.sets, "override, as key=value (repeatable)");
    for (const char *key : {"dim", "shape", "r", "s", "u", "eps", "u_prime", "delta", "reps",
                            "seed", "r_big_factor", "c4", "mc_tol", "solver_tol",
                            "max_bridge_attempts", "workers", "out_dir", "b_exponent"}) {
        std::string k = key;
        app->add_option_function<std::string>(
            "--" + k, [&args, k](const std::string &v) { args.sets.push_back(k + "=" + v); },
            "config key " + k);
    }
}

RunConfig resolve_config(const ConfigArgs &args) {
    RunConfig cfg = args.file.empty() ? RunConfig{} : parse_config_file(args.file);
    if (const char *env = std::getenv("RILAB_OUT_DIR"); env && args.file.empty())
        cfg.out_dir = env;
    apply_overrides(cfg, args.sets);
    validate(cfg);
    return cfg;
}

int cmd_geometry(const RunConfig &cfg, bool full) {
    GeometryTriple g = build_geometry(cfg.shape, cfg.r, cfg.s, cfg.dim);
    nlohmann::json j;
    j["shape"] = to_string(cfg.shape);
    j["r"] = cfg.r;
    j["s"] = cfg.s;
    j["d"] = cfg.dim;
    j["size_a1"] = g.a1.size();
    j["size_boundary_a1"] = g.boundary_a1.size();
    j["size_v"] = g.v.size();
    j["size_a2_complement"] = g.a2_complement.size();
    j["size_boundary_a2"] = g.boundary_a2.size();
    j["separation_holds"] = separation_holds(g);
    if (full) {
        auto dump = [&](const FiniteSet &s) {
            nlohmann::json pts = nlohmann::json::array();
            for (const Pt &p : s.points()) {
                nlohmann::json c = nlohmann::json::array();
                for (int i = 0; i < cfg.dim; ++i) c.push_back(p.c[i]);
                pts.push_back(c);
            }
            return pts;
        };
        j["a1"] = dump(g.a1);
        j["v"] = dump(g.v);
        j["boundary_a2"] = dump(g.boundary_a2);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_green(const RunConfig &cfg, const std::string &offset, bool use_mc) {
    Pt x = parse_points(offset, cfg.dim).front();
    GreenTable green(cfg.dim);
    nlohmann::json j;
    if (use_mc) {
        McGreenResult mc = mc_green({x}, cfg.dim, 2'000'000, 24, cfg.seed);
        j["value"] = mc.value.front();
        j["error_bound"] = mc.std_error.front();
        j["method"] = "mc";
    } else {
        j["value"] = green(x);
        j["error_bound"] = 1e-8;
        j["method"] = "quadrature";
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_capacity(const RunConfig &cfg, const std::string &points, const std::string &method) {
    GreenTable green(cfg.dim);
    FiniteSet a;
    if (!points.empty()) {
        a = FiniteSet(parse_points(points, cfg.dim), cfg.dim);
    } else {
        GeometryTriple g = build_geometry(cfg.shape, cfg.r, cfg.s, cfg.dim);
        a = g.a1;
    }
    nlohmann::json j;
    if (method == "mc") {
        CapacityResult res = capacity_mc_escape(a, green, 20000, 4 * cfg.r + 20, cfg.seed);
        j["value"] = res.value;
        j["error_bound"] = res.error_bound;
    } else if (method == "last_exit") {
        CapacityResult res = capacity_last_exit(a, green);
        j["value"] = res.value;
        j["error_bound"] = res.error_bound;
    } else {
        throw CLI::ValidationError("method", "expected last_exit or mc");
    }
    j["method"] = method;
    j["points"] = a.size();
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const RunConfig &cfg) {
    GreenTable green(cfg.dim);
    GeometryTriple g = build_geometry(cfg.shape, cfg.r, cfg.s, cfg.dim);
    EquilibriumMeasure eq = equilibrium_measure(g.a1, green);
    Rng rng(cfg.seed, 0);
    SoupParams params;
    params.r_big_factor = cfg.r_big_factor;
    TrajectorySoup soup = sample_soup(g.a1, cfg.u, green, eq, rng, params);
    OccupancyField occ = restrict_soup(soup, cfg.u);
    nlohmann::json j;
    j["u"] = cfg.u;
    j["seed"] = cfg.seed;
    j["window_size"] = g.a1.size();
    j["trajectories"] = soup.arrivals.size();
    nlohmann::json pts = nlohmann::json::array();
    for (const Pt &p : occ.occupied) {
        if (!g.a1.contains(p)) continue;
        nlohmann::json c = nlohmann::json::array();
        for (int i = 0; i < cfg.dim; ++i) c.push_back(p.c[i]);
        pts.push_back(c);
    }
    j["occupied"] = pts;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_experiment(const RunConfig &cfg, const std::string &name) {
    ExperimentReport report = run_experiment(name, cfg);
    std::filesystem::create_directories(cfg.out_dir);
    write_csv(report, cfg.out_dir + "/" + name + ".csv");
    write_json_summary(report, cfg.out_dir + "/" + name + ".json");
    std::cout << "experiment " << name << (report.passed() ? ": pass" : ": threshold failure")
              << " (" << report.runtime_sec << "s)\n";
    for (const auto &f : report.flags)
        std::cout << "  [" << (f.second ? "ok" : "FAIL") << "] " << f.first << '\n';
    for (const auto &n : report.notes) std::cout << "  note: " << n << '\n';
    return report.passed() ? 0 : 2;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"simulation laboratory for random interlacement couplings"};
    app.set_version_flag("--version", std::string("rilab ") + kVersion + " (golden schema " +
                                          std::to_string(kGoldenSchemaVersion) + ")");
    app.require_subcommand(1);

    ConfigArgs cargs;
    bool geom_full = false;
    std::string offset = "0,0,0", points, method = "last_exit", exp_name;
    bool green_mc_flag = false;

    CLI::App *geom = app.add_subcommand("geometry", "describe the nested geometry as JSON");
    add_config_options(geom, cargs);
    geom->add_flag("--full", geom_full, "include full point lists");

    CLI::App *greenc = app.add_subcommand("green", "lattice Green function at an offset");
    add_config_options(greenc, cargs);
    greenc->add_option("--offset", offset, "comma-separated lattice offset");
    greenc->add_flag("--mc", green_mc_flag, "use the Monte Carlo oracle");

    CLI::App *capc = app.add_subcommand("capacity", "capacity of a finite set");
    add_config_options(capc, cargs);
    capc->add_option("--points", points, "semicolon-separated points, e.g. '0,0,0;1,0,0'");
    capc->add_option("--method", method, "last_exit (default) or mc");

    CLI::App *simc = app.add_subcommand("simulate", "occupied points of one soup as JSON");
    add_config_options(simc, cargs);

    CLI::App *expc = app.add_subcommand("experiment", "run a named experiment");
    add_config_options(expc, cargs);
    expc->add_option("name", exp_name, "experiment name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        RunConfig cfg = resolve_config(cargs);
        if (geom->parsed()) return cmd_geometry(cfg, geom_full);
        if (greenc->parsed()) return cmd_green(cfg, offset, green_mc_flag);
        if (capc->parsed()) return cmd_capacity(cfg, points, method);
        if (simc->parsed()) return cmd_simulate(cfg);
        if (expc->parsed()) return cmd_experiment(cfg, exp_name);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
