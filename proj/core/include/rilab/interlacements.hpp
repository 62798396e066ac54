#ifndef RILAB_INTERLACEMENTS_HPP
#define RILAB_INTERLACEMENTS_HPP

#include <set>
#include <vector>

#include "rilab/potential.hpp"
#include "rilab/walk.hpp"

namespace rilab {

struct SoupParams {
    int r_big_factor = 10;
    long long step_cap = kDefaultStepCap;
};

// Interlacement trajectories hitting a finite window, labeled by their Poisson
// arrival level so one soup serves every u <= u_max at once.
struct TrajectorySoup {
    FiniteSet window;
    double u_max = 0;
    struct Arrival {
        double level;
        Path trajectory; // truncated at the escape decision
    };
    std::vector<Arrival> arrivals; // sorted by level
};

struct OccupancyField {
    std::set<Pt> occupied;
};

TrajectorySoup sample_soup(const FiniteSet &window, double u_max, const GreenTable &green,
                           const EquilibriumMeasure &eq, Rng &rng,
                           const SoupParams &params = {});

OccupancyField restrict_soup(const TrajectorySoup &soup, double u);

struct VacantEstimate {
    double estimate;
    double std_error;
};

// Monte Carlo frequency of {a stays vacant at level u} over fresh soups.
VacantEstimate vacant_probability(const FiniteSet &window, const FiniteSet &a, double u,
                                  long long reps, const GreenTable &green, uint64_t seed,
                                  const SoupParams &params = {});

// One coupled sample of the occupied subsets of `window` at several levels;
// monotone in u by construction.  Used by the covariance experiment.
std::vector<std::vector<uint8_t>> sample_occupancy_levels(const FiniteSet &window,
                                                          const std::vector<double> &levels,
                                                          const GreenTable &green,
                                                          const EquilibriumMeasure &eq, Rng &rng,
                                                          const SoupParams &params = {});

} // namespace rilab

#endif
