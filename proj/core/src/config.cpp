#include "rilab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rilab {

namespace {

void set_key(RunConfig &c, const std::string &key, const std::string &val) {
    try {
        if (key == "dim") c.dim = std::stoi(val);
        else if (key == "shape") c.shape = shape_from_string(val);
        else if (key == "r") c.r = std::stoi(val);
        else if (key == "s") c.s = std::stoi(val);
        else if (key == "u") c.u = std::stod(val);
        else if (key == "eps") c.eps = std::stod(val);
        else if (key == "u_prime") c.u_prime = std::stod(val);
        else if (key == "delta") c.delta = std::stod(val);
        else if (key == "reps") c.reps = std::stoll(val);
        else if (key == "seed") c.seed = std::stoull(val);
        else if (key == "r_big_factor") c.r_big_factor = std::stoi(val);
        else if (key == "c4") c.c4 = std::stod(val);
        else if (key == "mc_tol") c.mc_tol = std::stod(val);
        else if (key == "solver_tol") c.solver_tol = std::stod(val);
        else if (key == "max_bridge_attempts") c.max_bridge_attempts = std::stoi(val);
        else if (key == "workers") c.workers = std::stoi(val);
        else if (key == "out_dir") c.out_dir = val;
        else if (key == "b_exponent") c.b_exponent = std::stod(val);
        else throw std::invalid_argument("unknown config key: " + key);
    } catch (const std::invalid_argument &) {
        throw;
    } catch (const std::exception &) {
        throw std::invalid_argument("bad value for config key " + key + ": " + val);
    }
}

std::string trim(const std::string &s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

} // namespace

std::map<std::string, std::string> RunConfig::echo() const {
    std::map<std::string, std::string> m;
    auto num = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    m["dim"] = std::to_string(dim);
    m["shape"] = to_string(shape);
    m["r"] = std::to_string(r);
    m["s"] = std::to_string(s);
    m["u"] = num(u);
    m["eps"] = num(eps);
    m["u_prime"] = num(u_prime);
    m["delta"] = num(delta);
    m["reps"] = std::to_string(reps);
    m["seed"] = std::to_string(seed);
    m["r_big_factor"] = std::to_string(r_big_factor);
    m["c4"] = num(c4);
    m["mc_tol"] = num(mc_tol);
    m["solver_tol"] = num(solver_tol);
    m["max_bridge_attempts"] = std::to_string(max_bridge_attempts);
    m["workers"] = std::to_string(workers);
    m["out_dir"] = out_dir;
    m["b_exponent"] = num(b_exponent);
    return m;
}

RunConfig parse_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    RunConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key=value: " + t);
        set_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

void apply_overrides(RunConfig &cfg, const std::vector<std::string> &kv) {
    for (const std::string &item : kv) {
        size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override is not key=value: " + item);
        set_key(cfg, trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
}

void validate(const RunConfig &cfg) {
    if (cfg.dim < 3) throw std::invalid_argument("dim must be >= 3 (transient walk)");
    if (cfg.r < 1 || cfg.s < 1) throw std::invalid_argument("r and s must be positive");
    if (!(cfg.u > 0)) throw std::invalid_argument("u must be positive");
    if (!(cfg.eps >= 0 && cfg.eps <= 0.25))
        throw std::invalid_argument("eps must lie in [0, 1/4]");
    if (!(cfg.delta > 0)) throw std::invalid_argument("delta must be positive");
    if (cfg.reps < 0) throw std::invalid_argument("reps must be nonnegative");
    if (cfg.r_big_factor < 2) throw std::invalid_argument("r_big_factor must be >= 2");
    if (!(cfg.c4 > 0 && cfg.c4 < 1)) throw std::invalid_argument("c4 must lie in (0, 1)");
    if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (cfg.max_bridge_attempts < 0)
        throw std::invalid_argument("max_bridge_attempts must be nonnegative");
    double d = cfg.dim;
    double bmax = cfg.shape == Shape::Ball ? (2 * d - 2) / d : (4 * d - 4) / (3 * d - 2);
    if (!(cfg.b_exponent >= 1.0 && cfg.b_exponent < bmax))
        throw std::invalid_argument("b_exponent must lie in [1, " + std::to_string(bmax) +
                                    ") for this shape");
}

} // namespace rilab
