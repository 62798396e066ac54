#ifndef RILAB_DENSITIES_HPP
#define RILAB_DENSITIES_HPP

#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "rilab/geometry.hpp"
#include "rilab/linsys.hpp"
#include "rilab/rng.hpp"
#include "rilab/walk.hpp"

namespace rilab {

struct RareEventError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Collapsed endpoint space: one atom per (w0 in dA1, y0 in V) plus Theta for
// excursions that miss A1.  Pair order is fixed by the geometry enumeration.
struct EndpointSpace {
    const FiniteSet *ba1 = nullptr;
    const FiniteSet *v = nullptr;
    int n_pairs = 0;
    int theta = 0; // == n_pairs; total atom count is n_pairs + 1

    int pair_index(int iw0, int iy0) const { return iw0 * v->size() + iy0; }
    int w0_of(int atom) const { return atom / v->size(); }
    int y0_of(int atom) const { return atom % v->size(); }
};

// Exact excursion-endpoint densities for one geometry, factored as
//   g_{(w,y)}(w0,y0) = a(w,w0) * KG(w0,y0) * q(y0,y) / exit(w,y),
// with a the first-A1-hit law from w, KG the Green matrix killed outside
// A2^C, q the V-avoiding exit law and exit the harmonic measure on the inner
// boundary of A2.  All four factors come from sparse Dirichlet solves.
class DensityModel {
  public:
    explicit DensityModel(const GeometryTriple &g);

    const GeometryTriple &geom() const { return *g_; }
    const EndpointSpace &space() const { return space_; }

    // full density vector over pairs + Theta (last entry)
    std::vector<double> density(const Pt &w, const Pt &y) const;
    double mass(const Pt &w, const Pt &y, const Pt &w0, const Pt &y0) const;
    double theta_mass(const Pt &w, const Pt &y) const;

    // harmonic measure P_w[exit A2^C at y]
    double exit_prob(const Pt &w, const Pt &y) const;
    // probability from w0 of visiting y0 before A2
    double f_a1(const Pt &w0, const Pt &y0) const;
    double kg_pair(const Pt &w0, const Pt &y0) const;
    // probability from y0 of exiting without revisiting V
    double no_return_mass(const Pt &y0) const;

    // factor matrices, indexed by the geometry enumerations
    const Eigen::MatrixXd &a_hit() const { return a_; }      // |V| x |dA1|
    const Eigen::MatrixXd &kg_pairs() const { return kgp_; } // |dA1| x |V|
    const Eigen::VectorXd &kg_diag() const { return kgdiag_; }
    const Eigen::MatrixXd &q_exit() const { return q_; }    // |V| x |dA2|
    const Eigen::MatrixXd &exit_law() const { return e_; }  // |V| x |dA2|

    // Exact conditional excursion from w0 with final V-visit y0: h-transform
    // leg to the first y0 hit plus a geometric number of conditioned loops.
    Path sample_excursion_exact(const Pt &w0, const Pt &y0, Rng &rng,
                                long long step_cap = kDefaultStepCap) const;
    // Rejection version: free excursions from w0 accepted on the last V
    // visit; throws RareEventError past max_attempts.
    Path sample_excursion_given_endpoints(const Pt &w0, const Pt &y0, Rng &rng,
                                          int max_attempts = 100000,
                                          long long step_cap = kDefaultStepCap) const;

    const LatticeDomain &full_domain() const { return *dom_; }
    // killed-Green column of y0 over the full domain, cached
    const std::vector<float> &kg_column(int iy0) const;

  private:
    const GeometryTriple *g_;
    EndpointSpace space_;
    std::unique_ptr<LatticeDomain> dom_; // A2^C
    std::unique_ptr<LatticeFactor> factor_;
    Eigen::MatrixXd a_, kgp_, q_, e_;
    Eigen::VectorXd kgdiag_;
    mutable std::unordered_map<int, std::vector<float>> col_cache_;
};

struct DensityNeighborhood {
    Pt w0{}, y0{};
    std::vector<std::pair<int, int>> gamma; // (iw0, iy0) member pairs
    double alpha = 0;
    double ell = 0;
    int subsample = 0;
};

// alpha = inf over sampled sources and Gamma pairs of g(pair)/g(center),
// ell = sup over sampled sources of g(center); Gamma is the c4*s box around
// the center pair in max-of-Euclidean distance.
DensityNeighborhood alpha_ell(const DensityModel &m, const Pt &w0, const Pt &y0, double c4,
                              int subsample, uint64_t seed);

} // namespace rilab

#endif
