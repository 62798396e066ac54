#ifndef RILAB_SLT_HPP
#define RILAB_SLT_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "rilab/rng.hpp"
#include "rilab/walk.hpp"

namespace rilab {

// Finite atom space with per-atom measure mass; the canonical instance is the
// collapsed endpoint space (dA1 x V) u {Theta} with unit masses.
struct AtomSpace {
    std::vector<double> mass;
    int size() const { return static_cast<int>(mass.size()); }
};

// Poisson process on atoms x (0,inf) with intensity mass x dv, realized
// lazily; the j-th height above an atom depends only on (seed, atom, j), so
// realization order cannot perturb the process.
class PoissonSheet {
  public:
    PoissonSheet(const AtomSpace &space, uint64_t seed, uint64_t stream);

    double height(int atom, int j) const;
    const AtomSpace &space() const { return *space_; }

  private:
    const AtomSpace *space_;
    CounterRng rng_;
    mutable std::vector<std::vector<double>> realized_;
};

struct SltStep {
    double xi;
    int chosen;
};

// One soft-local-times consumer of a sheet: accumulated G, per-atom
// consumption counters, and the step history.
class SltState {
  public:
    explicit SltState(const PoissonSheet &sheet);

    // g must be a probability density w.r.t. the atom masses.  Advances the
    // state by the unique minimizing Poisson point.
    SltStep step(const std::vector<double> &g);

    const std::vector<double> &g_accum() const { return g_; }
    const std::vector<SltStep> &history() const { return hist_; }
    // points consumed so far, as (atom, height index) pairs in order
    const std::vector<std::pair<int, int>> &used() const { return used_; }
    const PoissonSheet &sheet() const { return *sheet_; }
    long long tie_count() const { return ties_; }

  private:
    const PoissonSheet *sheet_;
    std::vector<double> g_;
    std::vector<int> next_;
    std::vector<SltStep> hist_;
    std::vector<std::pair<int, int>> used_;
    long long ties_ = 0;
};

using DensityProvider = std::function<std::vector<double>(const SltState &)>;
using StopRule = std::function<bool(const SltState &)>;

SltState run_slt(const PoissonSheet &sheet, const DensityProvider &provider, const StopRule &stop);

struct DominanceResult {
    bool dominated;
    int witness_atom = -1; // set when violated
};

// Checks g_low <= g_high pointwise for two states on the same sheet and, when
// dominated, audits that every point consumed by `low` lies below the final
// curve of `high`.
DominanceResult dominance_certificate(const SltState &low, const SltState &high);

// Memoized excursion lift: a Poisson point keeps the path it drew forever, so
// any two processes that select the same point share the same excursion.
class PathAttachment {
  public:
    using Sampler = std::function<Path(int atom, Rng &)>;

    PathAttachment(Sampler sampler, uint64_t seed) : sampler_(std::move(sampler)), seed_(seed) {}

    const Path &get(int atom, int j);

  private:
    Sampler sampler_;
    uint64_t seed_;
    std::map<std::pair<int, int>, Path> memo_;
};

} // namespace rilab

#endif
