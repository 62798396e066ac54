#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rilab/config.hpp"
#include "rilab/experiments.hpp"
#include "rilab/report.hpp"

using namespace rilab;

namespace {

bool all_ok = true;

void line(int k, const std::string &what, bool ok, const std::string &detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", k, what.c_str(),
                detail.empty() ? "" : " | ", detail.c_str());
    std::fflush(stdout);
    if (!ok) all_ok = false;
}

std::string flag_failures(const ExperimentReport &r) {
    std::ostringstream os;
    for (const auto &f : r.flags)
        if (!f.second) os << f.first << " ";
    return os.str();
}

std::string read_file(const std::string &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunConfig base() {
    RunConfig cfg;
    cfg.workers = 4;
    return cfg;
}

} // namespace

int main() {
    // 1: vacant probabilities against exp(-u cap A), 1e5 soups, under 10 min
    {
        RunConfig cfg = base();
        cfg.reps = 100000;
        ExperimentReport r = run_vacant_law(cfg);
        bool ok = r.passed() && r.runtime_sec <= 600;
        std::ostringstream d;
        d << "runtime " << int(r.runtime_sec) << "s " << flag_failures(r);
        line(1, "vacant law matches exp(-u cap A) at 3 sigma", ok, d.str());
    }

    // 2: two-point covariance closed form and its decay exponent
    {
        RunConfig cfg = base();
        cfg.reps = 200000;
        ExperimentReport r = run_covariance(cfg);
        line(2, "covariance closed form at 3 sigma, slope within 0.5 of -(d-2)", r.passed(),
             flag_failures(r));
    }

    // 3: soft-local-times law on the explicit 3-atom chain
    {
        RunConfig cfg = base();
        cfg.reps = 100000;
        ExperimentReport r = run_slt_law(cfg);
        line(3, "3-atom chain joint law chi-square and xi ~ Exp(1) KS", r.passed(),
             flag_failures(r));
    }

    // 4: mean soft local time equals mean matching-excursion count
    {
        RunConfig cfg = base();
        cfg.r = 10;
        cfg.s = 4;
        cfg.reps = 10000;
        ExperimentReport r = run_expectation_identity(cfg);
        line(4, "soft-time expectation identity at 3 sigma on 5 endpoint sets", r.passed(),
             flag_failures(r));
    }

    // 5: endpoint density table against sampled bridge frequencies
    {
        RunConfig cfg = base();
        cfg.reps = 100000;
        ExperimentReport r = run_density_oracle(cfg);
        line(5, "density table vs 1e5 excursion frequencies, row sums, reversibility",
             r.passed(), flag_failures(r));
    }

    // 6: capacity solver against MC escape, plus set monotonicity
    {
        RunConfig cfg = base();
        ExperimentReport r = run_capacity_methods(cfg);
        line(6, "last-exit capacity vs MC within 1%, monotone and subadditive", r.passed(),
             flag_failures(r));
    }

    // 7: Green function quadrature against the MC oracle
    {
        RunConfig cfg = base();
        ExperimentReport r = run_green_oracle(cfg);
        line(7, "Green quadrature vs MC to 3 decimals, symmetry, harmonicity", r.passed(),
             flag_failures(r));
    }

    // 8: sandwich coupling at the reference geometry, with the s-trend
    {
        RunConfig cfg = base();
        cfg.r = 12;
        cfg.s = 4;
        cfg.u = 1;
        cfg.eps = 0.25;
        cfg.reps = 400;
        ExperimentReport r = run_sandwich(cfg);
        RunConfig c3 = cfg;
        c3.s = 3;
        c3.reps = 60;
        ExperimentReport r3 = run_sandwich(c3);
        RunConfig c6 = cfg;
        c6.s = 6;
        c6.reps = 60;
        ExperimentReport r6 = run_sandwich(c6);
        double total = r.runtime_sec + r3.runtime_sec + r6.runtime_sec;
        bool trend = r6.summary.at("frequency") >= r3.summary.at("frequency");
        bool ok = r.passed() && trend && total <= 1800;
        std::ostringstream d;
        d << "freq " << r.summary.at("frequency") << " s3 " << r3.summary.at("frequency")
          << " s6 " << r6.summary.at("frequency") << " runtime " << int(total) << "s "
          << flag_failures(r);
        line(8, "sandwich frequency >= golden, zero nesting violations, s-trend", ok, d.str());
    }

    // 9: appendix decay exponents and the annulus escape bracket
    {
        RunConfig cfg = base();
        ExperimentReport r = run_appendix_scalings(cfg);
        line(9, "scaling exponents within brackets, annulus violations = 0", r.passed(),
             flag_failures(r));
    }

    // 10: byte-identical CSV on rerun with workers=1
    {
        RunConfig cfg = base();
        cfg.workers = 1;
        cfg.reps = 2000;
        namespace fs = std::filesystem;
        fs::path dir = fs::temp_directory_path() / "rilab_acceptance";
        fs::create_directories(dir);
        ExperimentReport a = run_vacant_law(cfg);
        ExperimentReport b = run_vacant_law(cfg);
        write_csv(a, (dir / "a.csv").string());
        write_csv(b, (dir / "b.csv").string());
        std::string sa = read_file((dir / "a.csv").string());
        std::string sb = read_file((dir / "b.csv").string());
        line(10, "identical (config, seed, workers=1) rerun is byte-identical",
             !sa.empty() && sa == sb);
    }

    return all_ok ? 0 : 1;
}
