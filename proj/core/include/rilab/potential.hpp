#ifndef RILAB_POTENTIAL_HPP
#define RILAB_POTENTIAL_HPP

#include <vector>

#include <Eigen/Dense>

#include "rilab/green.hpp"
#include "rilab/linsys.hpp"
#include "rilab/rng.hpp"

namespace rilab {

// Absorption probabilities of the walk started at `start` for each class of
// absorbing vertices, on the complement of which the walk moves freely inside
// `domain`.  Exact up to solver tolerance; probabilities sum to 1 when the
// classes cover the whole outer boundary.
std::vector<double> dirichlet_hitting(const LatticeDomain &domain,
                                      const std::vector<FiniteSet> &classes,
                                      const Pt &start, double tol = 1e-10);

// Expected visit counts before absorption; one column of (I-P)^{-1}.
Eigen::VectorXd killed_green_column(const LatticeFactor &factor, const LatticeDomain &domain,
                                    const Pt &source);
// Dense killed-Green matrix for small domains.
Eigen::MatrixXd killed_green(const LatticeDomain &domain);

struct EquilibriumMeasure {
    FiniteSet support;
    std::vector<double> weights; // aligned with support.points(); zero off the boundary
    double total = 0;            // the capacity
    std::vector<double> cumulative;

    const Pt &sample(Rng &rng) const;
};

struct CapacityResult {
    double value;
    double error_bound;
};

// Last-exit system sum_y G(x,y) e(y) = 1 on A; returns e and cap(A) = sum e.
EquilibriumMeasure equilibrium_measure(const FiniteSet &a, const GreenTable &green);

CapacityResult capacity_last_exit(const FiniteSet &a, const GreenTable &green);

// Escape-probability Monte Carlo with the exact far-field escape correction
// p_ret(z) = sum_y G(z,y) e_A(y) applied at the truncation sphere.
CapacityResult capacity_mc_escape(const FiniteSet &a, const GreenTable &green,
                                  long long walks_per_point, int truncation_radius,
                                  uint64_t seed);

// Exact return probability used by far-field escape decisions.
double return_probability(const Pt &x, const EquilibriumMeasure &eq, const GreenTable &green);

} // namespace rilab

#endif
