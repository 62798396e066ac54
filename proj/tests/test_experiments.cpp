#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "rilab/config.hpp"
#include "rilab/experiments.hpp"
#include "rilab/report.hpp"

using namespace rilab;

namespace {

RunConfig tiny() {
    RunConfig cfg;
    cfg.r = 4;
    cfg.s = 2;
    cfg.reps = 3;
    return cfg;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config defaults validate and echo every key") {
    RunConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    auto echo = cfg.echo();
    for (const char *key : {"dim", "shape", "r", "s", "u", "eps", "u_prime", "delta", "reps",
                            "seed", "r_big_factor", "c4", "mc_tol", "solver_tol",
                            "max_bridge_attempts", "workers", "out_dir", "b_exponent"})
        CHECK(echo.count(key) == 1);
}

TEST_CASE("config rejects unknown keys and out-of-range values by name") {
    RunConfig cfg;
    bool named = false;
    try {
        apply_overrides(cfg, {"frobnicate=1"});
    } catch (const std::invalid_argument &e) {
        named = std::string(e.what()).find("frobnicate") != std::string::npos;
    }
    CHECK(named);
    apply_overrides(cfg, {"eps=0.3"});
    named = false;
    try {
        validate(cfg);
    } catch (const std::invalid_argument &e) {
        named = std::string(e.what()).find("eps") != std::string::npos;
    }
    CHECK(named);
    cfg = RunConfig{};
    cfg.eps = 0.25; // the boundary value is the standard coupling configuration
    CHECK_NOTHROW(validate(cfg));
    cfg = RunConfig{};
    cfg.dim = 2;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("config file parsing with comments and flag overrides") {
    std::string path = "cfg_tmp.txt";
    {
        std::ofstream out(path);
        out << "# comment\nr=6\ns = 3\nu=0.5\n\nshape=ball\n";
    }
    RunConfig cfg = parse_config_file(path);
    CHECK(cfg.r == 6);
    CHECK(cfg.s == 3);
    CHECK(cfg.u == doctest::Approx(0.5));
    apply_overrides(cfg, {"r=8", "seed=42"});
    CHECK(cfg.r == 8);
    CHECK(cfg.seed == 42);
    CHECK_THROWS_AS(parse_config_file("no_such_config_file.txt"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("csv rows are sorted so insertion order cannot change the bytes") {
    ExperimentReport a, b;
    a.name = b.name = "demo";
    a.row("z_stat", 1, 7, 1.5);
    a.row("a_stat", 0, 7, 2.5, 0.25);
    a.row("a_stat", 1, 7, 3.5);
    b.row("a_stat", 1, 7, 3.5);
    b.row("z_stat", 1, 7, 1.5);
    b.row("a_stat", 0, 7, 2.5, 0.25);
    write_csv(a, "csv_a.tmp");
    write_csv(b, "csv_b.tmp");
    std::string sa = slurp("csv_a.tmp"), sb = slurp("csv_b.tmp");
    CHECK(sa == sb);
    CHECK(sa.substr(0, sa.find('\n')) == "experiment,rep,seed,statistic,value,std_error");
    std::remove("csv_a.tmp");
    std::remove("csv_b.tmp");
}

TEST_CASE("format_double round trips and stays short") {
    for (double v : {0.1, 1.0 / 3.0, 12345.6789, 1e-300, 0.0, -2.5}) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("golden thresholds load and degrade gracefully") {
    GoldenThresholds missing = load_golden("no_such_golden.json");
    CHECK_FALSE(missing.loaded);
    CHECK(missing.values.empty());
    {
        std::ofstream out("golden_tmp.json");
        out << "{\"schema_version\": 1, \"values\": {\"k\": 0.25}}\n";
    }
    GoldenThresholds g = load_golden("golden_tmp.json");
    CHECK(g.loaded);
    CHECK(g.values.at("k") == doctest::Approx(0.25));
    std::remove("golden_tmp.json");
}

TEST_CASE("unknown experiment name is rejected") {
    CHECK_THROWS_AS(run_experiment("no-such-experiment", tiny()), std::invalid_argument);
    CHECK(experiment_names().size() == 12);
}

TEST_CASE("concentration with reps=0 gives an empty report without flags") {
    RunConfig cfg = tiny();
    cfg.reps = 0;
    ExperimentReport rep = run_concentration(cfg);
    CHECK(rep.flags.empty());
    CHECK(rep.passed());
    CHECK(rep.summary.at("reps") == 0);
}

TEST_CASE("one-sided sprinkling requires u_prime above u") {
    RunConfig cfg = tiny();
    cfg.u_prime = cfg.u;
    CHECK_THROWS_AS(run_one_sided_sprinkling(cfg), std::invalid_argument);
}

TEST_CASE("sandwich runs, audits and is deterministic across worker counts") {
    RunConfig cfg = tiny();
    ExperimentReport one = run_sandwich(cfg);
    CHECK(one.summary.at("nesting_violations") == 0);
    long long per_rep = 0;
    for (const auto &r : one.rows)
        if (r.statistic == "sandwich_holds") ++per_rep;
    CHECK(per_rep == cfg.reps);

    cfg.workers = 2;
    ExperimentReport two = run_sandwich(cfg);
    write_csv(one, "sw_one.tmp");
    write_csv(two, "sw_two.tmp");
    CHECK(slurp("sw_one.tmp") == slurp("sw_two.tmp"));
    std::remove("sw_one.tmp");
    std::remove("sw_two.tmp");
}

TEST_CASE("sandwich with eps=0 degenerates to one level and still audits") {
    RunConfig cfg = tiny();
    cfg.eps = 0;
    ExperimentReport rep = run_sandwich(cfg);
    CHECK(rep.summary.at("nesting_violations") == 0);
    CHECK(rep.summary.at("frequency") >= 0);
}
