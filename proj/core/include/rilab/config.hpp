#ifndef RILAB_CONFIG_HPP
#define RILAB_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rilab/geometry.hpp"

namespace rilab {

// Flat key-value run configuration.  Every key has a documented default;
// unknown keys are rejected by name.
struct RunConfig {
    int dim = 3;
    Shape shape = Shape::Ball;
    int r = 12;
    int s = 4;
    double u = 1.0;
    double eps = 0.25;      // sprinkling fraction in [0, 1/4]
    double u_prime = 2.0;   // one-sided sprinkling level, must exceed u there
    double delta = 0.25;    // concentration bracket half-width
    long long reps = 400;
    uint64_t seed = 1;
    int r_big_factor = 10;  // escape-decision radius multiplier
    double c4 = 0.25;       // endpoint neighborhood radius fraction of s
    double mc_tol = 1e-3;
    double solver_tol = 1e-10;
    int max_bridge_attempts = 100000;
    int workers = 1;
    std::string out_dir = "out";
    double b_exponent = 1.0; // b of the inner-set scale; a = 2d-2-d*b

    double a_exponent() const { return 2.0 * dim - 2.0 - dim * b_exponent; }
    std::map<std::string, std::string> echo() const;
};

// file of key=value lines ('#' comments, blank lines allowed)
RunConfig parse_config_file(const std::string &path);
// overrides as "key=value" strings, applied on top of cfg
void apply_overrides(RunConfig &cfg, const std::vector<std::string> &kv);
// range and consistency checks; throws std::invalid_argument naming the rule
void validate(const RunConfig &cfg);

} // namespace rilab

#endif
