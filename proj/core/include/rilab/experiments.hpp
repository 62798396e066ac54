#ifndef RILAB_EXPERIMENTS_HPP
#define RILAB_EXPERIMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "rilab/config.hpp"
#include "rilab/report.hpp"

namespace rilab {

inline constexpr int kGoldenSchemaVersion = 1;

// Pilot-calibrated thresholds; asserted checks never come from paper
// constants.  A missing file or key downgrades the check to informational.
struct GoldenThresholds {
    int schema_version = kGoldenSchemaVersion;
    std::map<std::string, double> values;
    bool loaded = false;
};

GoldenThresholds load_golden(const std::string &path);
// RILAB_GOLDEN env var, else golden/thresholds.json next to the cwd
std::string default_golden_path();

// law and oracle experiments
ExperimentReport run_vacant_law(const RunConfig &cfg);
ExperimentReport run_covariance(const RunConfig &cfg);
ExperimentReport run_slt_law(const RunConfig &cfg);
ExperimentReport run_green_oracle(const RunConfig &cfg);
ExperimentReport run_capacity_methods(const RunConfig &cfg);
ExperimentReport run_density_oracle(const RunConfig &cfg);
ExperimentReport run_expectation_identity(const RunConfig &cfg);

// coupling experiments on the factored engine
ExperimentReport run_concentration(const RunConfig &cfg);
ExperimentReport run_sandwich(const RunConfig &cfg);
ExperimentReport run_one_sided_sprinkling(const RunConfig &cfg);
ExperimentReport run_monotone_statistics(const RunConfig &cfg);

// exact solver scaling studies
ExperimentReport run_appendix_scalings(const RunConfig &cfg);

std::vector<std::string> experiment_names();
ExperimentReport run_experiment(const std::string &name, const RunConfig &cfg);

} // namespace rilab

#endif
