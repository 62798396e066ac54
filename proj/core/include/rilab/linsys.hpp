#ifndef RILAB_LINSYS_HPP
#define RILAB_LINSYS_HPP

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "rilab/geometry.hpp"
#include "rilab/point.hpp"

namespace rilab {

// Transient vertices of a discrete Dirichlet problem, with a neighbor table;
// everything off the domain is absorbing.
class LatticeDomain {
  public:
    LatticeDomain(std::vector<Pt> pts, int d);

    int size() const { return verts_.size(); }
    int dim() const { return verts_.dim(); }
    const FiniteSet &verts() const { return verts_; }
    // in-domain neighbor index, or -1 when that neighbor is absorbing
    int nbr(int v, int k) const { return nbr_[static_cast<size_t>(v) * 2 * dim() + k]; }
    const Pt &point(int v) const { return verts_.points()[v]; }

    Eigen::SparseMatrix<double> system_matrix() const; // I - P

  private:
    FiniteSet verts_;
    std::vector<int32_t> nbr_;
};

// One-shot solve of (I - P) u = rhs: dense Cholesky below 3000 unknowns,
// diagonally preconditioned conjugate gradient above, residual 1e-10.
Eigen::VectorXd solve_dirichlet(const LatticeDomain &dom, const Eigen::VectorXd &rhs,
                                double tol = 1e-10);

// Sparse LDLT factorization of I - P for many right-hand sides on the same
// domain (density tables need thousands of columns).
class LatticeFactor {
  public:
    explicit LatticeFactor(const LatticeDomain &dom);
    Eigen::VectorXd solve(const Eigen::VectorXd &rhs) const;

  private:
    std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt_;
};

} // namespace rilab

#endif
