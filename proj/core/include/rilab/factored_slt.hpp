#ifndef RILAB_FACTORED_SLT_HPP
#define RILAB_FACTORED_SLT_HPP

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rilab/densities.hpp"
#include "rilab/rng.hpp"
#include "rilab/slt.hpp"

namespace rilab {

// Every excursion source (w, y) shares the same three factor matrices, so the
// per-step density never has to be materialized: scans run fused over float
// tables laid out in atom order.  Atom index = iw0 * |V| + iy0, Theta last.
struct FactorTables {
    const DensityModel *model = nullptr;
    int nw0 = 0, nv = 0, na2 = 0;
    int n_atoms = 0; // nw0 * nv + 1
    std::vector<float> kg; // atom-aligned killed-Green factor, nw0 * nv
};

FactorTables make_factor_tables(const DensityModel &m);

// Unit-mass Poisson sheet over the pair space + Theta.  Heights follow the
// same counter scheme as PoissonSheet, so a generic SltState on an equal-size
// space sees the identical realization.
class FactoredSheet {
  public:
    FactoredSheet(int n_atoms, uint64_t seed, uint64_t stream);

    int size() const { return n_; }
    double gap(int atom, int idx) const {
        return rng_.exponential(static_cast<uint64_t>(idx) * n_ + atom);
    }
    // first height per atom, realized once
    const std::vector<float> &first() const;

  private:
    int n_;
    CounterRng rng_;
    mutable std::vector<float> first_;
};

// One soft-local-times consumer of a FactoredSheet.  Copyable; a copy is a
// snapshot that can keep stepping independently (used for the prefix process
// at the lower level).
class FactoredProcess {
  public:
    FactoredProcess(const FactorTables &t, const FactoredSheet &sheet);

    // advance by the excursion source (w index in V, y index in dA2)
    SltStep step(int iw, int iy);

    const std::vector<float> &g() const { return g_; }
    int theta_atom() const { return t_->n_atoms - 1; }
    const std::vector<std::pair<int, int>> &used() const { return used_; }
    // consumed count per atom; consumed points at an atom are always the
    // prefix 0..count-1 of its height stack
    int consumed(int atom) const;
    const FactoredSheet &sheet() const { return *sheet_; }
    const FactorTables &tables() const { return *t_; }
    long long steps() const { return static_cast<long long>(used_.size()); }

  private:
    const FactorTables *t_;
    const FactoredSheet *sheet_;
    std::vector<float> h1_; // first unused height per atom
    std::vector<float> g_;  // accumulated soft local time, Theta last
    std::unordered_map<int, int> next_;
    std::vector<std::pair<int, int>> used_;
    std::vector<float> aw_, qc_;     // per-step factor buffers
    std::vector<float> gbuf_, rbuf_; // per-row density / ratio scan buffers
};

struct FactoredDominance {
    bool dominated;
    int witness = -1;
};

// g_low <= g_high at every atom (with float-scale slack) and, when dominated,
// the points consumed by low are a per-atom prefix of those consumed by high
// and each sits below high's curve.
FactoredDominance factored_dominance(const FactoredProcess &low, const FactoredProcess &high,
                                     double tol = 2e-5);

} // namespace rilab

#endif
