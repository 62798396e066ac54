#ifndef RILAB_CLOTHESLINE_HPP
#define RILAB_CLOTHESLINE_HPP

#include <vector>

#include "rilab/geometry.hpp"
#include "rilab/green.hpp"
#include "rilab/potential.hpp"
#include "rilab/walk.hpp"

namespace rilab {

struct ClotheslinePair {
    Pt w; // entrance to V
    Pt y; // subsequent exit through the inner boundary of A2
};

// Killed chain of excursion endpoints: pairs (W_k, Y_k) for k = 1..t_delta,
// where t_delta is the first exit whose V-return is declared an escape.  An
// empty realization is the cemetery start.
struct ClotheslineRealization {
    std::vector<ClotheslinePair> pairs;
    bool killed = true;
    int t_delta = 0;
};

struct ClotheslineStart {
    enum Kind { Equilibrium, FixedPoint, HittingFrom } kind = Equilibrium;
    Pt point{}; // FixedPoint: w0 in V; HittingFrom: y on the inner boundary of A2
};

// Shared precomputation for many realizations on one geometry.
struct ClotheslineContext {
    const GeometryTriple *g = nullptr;
    const GreenTable *green = nullptr;
    EquilibriumMeasure eq_v;
    long long r_big2 = 0; // squared escape-decision radius
    long long step_cap = kDefaultStepCap;
};

ClotheslineContext make_clothesline_context(const GeometryTriple &g, const GreenTable &green,
                                            int r_big_factor = 10,
                                            long long step_cap = kDefaultStepCap);

ClotheslineRealization sample_clothesline(const ClotheslineContext &ctx,
                                          const ClotheslineStart &start, Rng &rng);

// Level-u Poisson cloud of alternating K1/K2 visit skeletons, one trace per
// trajectory charged to K1.
struct GeneralizedClothesline {
    double u = 0;
    // trace j: x0 in K1, then alternating K2 / K1 visits until killing
    std::vector<std::vector<Pt>> traces;
};

struct ClothPair {
    EquilibriumMeasure eq1, eq2;
    long long r_big2 = 0;
    long long step_cap = kDefaultStepCap;
};

ClothPair make_cloth_pair(const FiniteSet &k1, const FiniteSet &k2, const GreenTable &green,
                          int r_big_factor = 10, long long step_cap = kDefaultStepCap);

GeneralizedClothesline sample_cloth_u(const ClothPair &cp, double u, const GreenTable &green,
                                      Rng &rng);

GeneralizedClothesline sample_cloth_u(const FiniteSet &k1, const FiniteSet &k2, double u,
                                      const GreenTable &green, Rng &rng,
                                      int r_big_factor = 10,
                                      long long step_cap = kDefaultStepCap);

} // namespace rilab

#endif
