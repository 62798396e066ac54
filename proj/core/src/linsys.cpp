#include "rilab/linsys.hpp"

#include <stdexcept>

#include <Eigen/IterativeLinearSolvers>

namespace rilab {

LatticeDomain::LatticeDomain(std::vector<Pt> pts, int d) : verts_(std::move(pts), d) {
    const int n = verts_.size();
    nbr_.assign(static_cast<size_t>(n) * 2 * d, -1);
    for (int v = 0; v < n; ++v) {
        int k = 0;
        for_neighbors(verts_.points()[v], d, [&](const Pt &q) {
            auto &slot = nbr_[static_cast<size_t>(v) * 2 * d + k++];
            if (verts_.contains(q)) slot = verts_.index_of(q);
        });
    }
}

Eigen::SparseMatrix<double> LatticeDomain::system_matrix() const {
    const int n = size(), twod = 2 * dim();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n) * (twod + 1));
    const double w = 1.0 / twod;
    for (int v = 0; v < n; ++v) {
        trip.emplace_back(v, v, 1.0);
        for (int k = 0; k < twod; ++k) {
            int u = nbr(v, k);
            if (u >= 0) trip.emplace_back(v, u, -w);
        }
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

Eigen::VectorXd solve_dirichlet(const LatticeDomain &dom, const Eigen::VectorXd &rhs, double tol) {
    const int n = dom.size();
    if (n == 0) return Eigen::VectorXd();
    if (n < 3000) {
        Eigen::MatrixXd a(Eigen::MatrixXd(dom.system_matrix()));
        return a.llt().solve(rhs);
    }
    Eigen::SparseMatrix<double> a = dom.system_matrix();
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(20000);
    cg.compute(a);
    Eigen::VectorXd u = cg.solve(rhs);
    if (cg.info() != Eigen::Success)
        throw std::runtime_error("conjugate gradient did not converge, residual " +
                                 std::to_string(cg.error()));
    return u;
}

LatticeFactor::LatticeFactor(const LatticeDomain &dom)
    : ldlt_(std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>()) {
    ldlt_->compute(dom.system_matrix());
    if (ldlt_->info() != Eigen::Success)
        throw std::runtime_error("sparse factorization failed");
}

Eigen::VectorXd LatticeFactor::solve(const Eigen::VectorXd &rhs) const {
    return ldlt_->solve(rhs);
}

} // namespace rilab
