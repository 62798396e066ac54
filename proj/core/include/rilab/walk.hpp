#ifndef RILAB_WALK_HPP
#define RILAB_WALK_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rilab/geometry.hpp"
#include "rilab/linsys.hpp"
#include "rilab/potential.hpp"
#include "rilab/rng.hpp"

namespace rilab {

struct Path {
    std::vector<Pt> v;
};

struct WalkTimeout : std::runtime_error {
    explicit WalkTimeout(Path partial)
        : std::runtime_error("step cap exceeded"), partial_path(std::move(partial)) {}
    Path partial_path;
};

constexpr long long kDefaultStepCap = 100'000'000;

// Simple random walk from `start` run until `stop` holds; the stopping vertex
// is the last path entry.
Path run_until(const Pt &start, int d, const std::function<bool(const Pt &)> &stop,
               long long step_cap, Rng &rng);

struct EndpointPair {
    bool theta = true; // excursion that never reaches A1
    Pt w0{};           // first A1 entry
    Pt y0{};           // last V visit before leaving to A2
};

struct ExcursionRecord {
    Path path;
    std::vector<int> d_times; // D_0 = 0, D_1, ...
    std::vector<int> r_times; // R_1, R_2, ... (indices where the path sits in A2)
    std::vector<EndpointPair> endpoint_pairs;
};

// Splits a path started in V into excursions by the alternating hitting times
// of A2 and V, and maps each completed excursion to its endpoint pair.
ExcursionRecord excursion_decompose(const Path &path, const GeometryTriple &g);

// Harmonic field of one exit vertex: h(x) = P_x[X_{H_A2} = y], the h-transform
// weight used by exact bridge sampling.
struct BridgeField {
    const LatticeDomain *domain = nullptr;
    Pt target{};
    Eigen::VectorXd h;

    double value(const Pt &p) const {
        if (p == target) return 1.0;
        if (!domain->verts().contains(p)) return 0.0;
        return h[domain->verts().index_of(p)];
    }
};

BridgeField make_exit_field(const LatticeDomain &a2c_domain, const LatticeFactor &factor,
                            const Pt &exit_vertex);

// Walk from w conditioned to leave A2^C at field.target; exact h-transform.
Path sample_exit_bridge(const Pt &w, const BridgeField &field, Rng &rng,
                        long long step_cap = kDefaultStepCap);

// Far-field escape decision: the walk sits at x outside the truncation
// sphere; returns the re-entry point on `eq.support`, or nothing when the
// walk escapes to infinity.  The escape probability is exact (last-exit
// identity); the re-entry law uses the normalized equilibrium measure, which
// carries an O(diam/|x|) bias documented in experiment metadata.
std::optional<Pt> decide_return_to(const Pt &x, const EquilibriumMeasure &eq,
                                   const GreenTable &green, Rng &rng);

} // namespace rilab

#endif
