#ifndef RILAB_GREEN_HPP
#define RILAB_GREEN_HPP

#include <mutex>
#include <unordered_map>
#include <vector>

#include "rilab/point.hpp"
#include "rilab/rng.hpp"

namespace rilab {

// Free-lattice Green's function G(x) = sum_k P_0[X_k = x] for the simple
// random walk in d >= 3, via the time representation
//   G(x) = d * int_0^inf prod_i e^{-t} I_{x_i}(t) dt,
// evaluated with adaptive quadrature on scaled Bessel functions.  Values are
// memoized under the coordinate symmetry group (permutation + sign flips).
class GreenTable {
  public:
    explicit GreenTable(int d, double tol = 1e-8);

    double operator()(const Pt &offset) const;
    double at(const Pt &x, const Pt &y) const { return (*this)(sub(x, y, d_)); }
    int dim() const { return d_; }

    // leading-order far-field value C_d |x|^{2-d}; used for truncation-bias
    // notes, not for the oracle itself
    double asymptotic(const Pt &offset) const;

  private:
    int d_;
    double tol_;
    mutable std::mutex mu_;
    mutable std::unordered_map<Pt, double, PtHash> cache_;
};

struct McGreenResult {
    std::vector<double> value;
    std::vector<double> std_error;
};

// Independent Monte Carlo oracle: truncated visit counting with a far-field
// tail correction at the exit sphere.  Offsets should be small relative to
// truncation_radius.
McGreenResult mc_green(const std::vector<Pt> &offsets, int d, long long n_walks,
                       int truncation_radius, uint64_t seed);

} // namespace rilab

#endif
