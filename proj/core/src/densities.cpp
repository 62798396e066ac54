#include "rilab/densities.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace rilab {

namespace {

std::vector<Pt> set_difference_pts(const FiniteSet &all, const FiniteSet &minus) {
    std::vector<Pt> out;
    for (const Pt &p : all.points())
        if (!minus.contains(p)) out.push_back(p);
    return out;
}

// rhs for "absorbed exactly at t": 1/2d per edge into t
Eigen::VectorXd absorption_rhs(const LatticeDomain &dom, const Pt &t, int d) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dom.size());
    for_neighbors(t, d, [&](const Pt &z) {
        if (dom.verts().contains(z)) rhs[dom.verts().index_of(z)] += 1.0 / (2 * d);
    });
    return rhs;
}

} // namespace

DensityModel::DensityModel(const GeometryTriple &g) : g_(&g) {
    const int d = g.d;
    space_.ba1 = &g.boundary_a1;
    space_.v = &g.v;
    space_.n_pairs = g.boundary_a1.size() * g.v.size();
    space_.theta = space_.n_pairs;

    dom_ = std::make_unique<LatticeDomain>(g.a2_complement.points(), d);
    factor_ = std::make_unique<LatticeFactor>(*dom_);

    const int nv = g.v.size(), nb1 = g.boundary_a1.size(), nb2 = g.boundary_a2.size();

    // first-A1-hit law a(w, w0), solved per w0 on A2^C \ A1
    LatticeDomain d1(set_difference_pts(g.a2_complement, g.a1), d);
    LatticeFactor f1(d1);
    a_.resize(nv, nb1);
    for (int iw0 = 0; iw0 < nb1; ++iw0) {
        Eigen::VectorXd h = f1.solve(absorption_rhs(d1, g.boundary_a1.points()[iw0], d));
        for (int iw = 0; iw < nv; ++iw) a_(iw, iw0) = h[d1.verts().index_of(g.v.points()[iw])];
    }

    // killed-Green pair block, diagonal, and the exit law by symmetry
    kgp_.resize(nb1, nv);
    kgdiag_.resize(nv);
    e_ = Eigen::MatrixXd::Zero(nv, nb2);
    std::vector<int> vidx(nv), b1idx(nb1);
    for (int i = 0; i < nv; ++i) vidx[i] = dom_->verts().index_of(g.v.points()[i]);
    for (int i = 0; i < nb1; ++i) b1idx[i] = dom_->verts().index_of(g.boundary_a1.points()[i]);
    for (int iy0 = 0; iy0 < nv; ++iy0) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dom_->size());
        rhs[vidx[iy0]] = 1.0;
        Eigen::VectorXd col = factor_->solve(rhs);
        for (int iw0 = 0; iw0 < nb1; ++iw0) kgp_(iw0, iy0) = col[b1idx[iw0]];
        kgdiag_[iy0] = col[vidx[iy0]];
        // exit(w, y) = sum_{z ~ y} KG(z, w) / 2d and KG(z, w) = KG(w, z)
        for (int iy = 0; iy < nb2; ++iy) {
            double s = 0;
            for_neighbors(g.boundary_a2.points()[iy], d, [&](const Pt &z) {
                if (dom_->verts().contains(z)) s += col[dom_->verts().index_of(z)];
            });
            e_(iy0, iy) = s / (2 * d);
        }
    }

    // V-avoiding exit law q(y0, y), solved per y on A2^C \ V
    LatticeDomain d2(set_difference_pts(g.a2_complement, g.v), d);
    LatticeFactor f2(d2);
    q_.resize(nv, nb2);
    for (int iy = 0; iy < nb2; ++iy) {
        const Pt &y = g.boundary_a2.points()[iy];
        Eigen::VectorXd u = f2.solve(absorption_rhs(d2, y, d));
        for (int iy0 = 0; iy0 < nv; ++iy0) {
            const Pt &y0 = g.v.points()[iy0];
            double s = 0;
            for_neighbors(y0, d, [&](const Pt &z) {
                if (d2.verts().contains(z)) s += u[d2.verts().index_of(z)];
                if (z == y) s += 1.0; // direct step out
            });
            q_(iy0, iy) = s / (2 * d);
        }
    }
}

std::vector<double> DensityModel::density(const Pt &w, const Pt &y) const {
    int iw = g_->v.index_of(w), iy = g_->boundary_a2.index_of(y);
    double ex = e_(iw, iy);
    if (ex <= 0) throw std::domain_error("source pair has zero exit probability");
    std::vector<double> out(space_.n_pairs + 1, 0.0);
    double sum = 0;
    const int nv = g_->v.size(), nb1 = g_->boundary_a1.size();
    for (int iw0 = 0; iw0 < nb1; ++iw0) {
        double aw = a_(iw, iw0);
        if (aw == 0) continue;
        for (int iy0 = 0; iy0 < nv; ++iy0) {
            double m = aw * kgp_(iw0, iy0) * q_(iy0, iy) / ex;
            out[space_.pair_index(iw0, iy0)] = m;
            sum += m;
        }
    }
    out[space_.theta] = std::max(0.0, 1.0 - sum);
    return out;
}

double DensityModel::mass(const Pt &w, const Pt &y, const Pt &w0, const Pt &y0) const {
    int iw = g_->v.index_of(w), iy = g_->boundary_a2.index_of(y);
    int iw0 = g_->boundary_a1.index_of(w0), iy0 = g_->v.index_of(y0);
    double ex = e_(iw, iy);
    if (ex <= 0) throw std::domain_error("source pair has zero exit probability");
    return a_(iw, iw0) * kgp_(iw0, iy0) * q_(iy0, iy) / ex;
}

double DensityModel::theta_mass(const Pt &w, const Pt &y) const {
    // independent of the pair masses: exit at y while avoiding A1 entirely
    const int d = g_->d;
    int iw = g_->v.index_of(w), iy = g_->boundary_a2.index_of(y);
    double ex = e_(iw, iy);
    if (ex <= 0) throw std::domain_error("source pair has zero exit probability");
    LatticeDomain d1(set_difference_pts(g_->a2_complement, g_->a1), d);
    Eigen::VectorXd t = solve_dirichlet(d1, absorption_rhs(d1, y, d));
    return t[d1.verts().index_of(w)] / ex;
}

double DensityModel::exit_prob(const Pt &w, const Pt &y) const {
    return e_(g_->v.index_of(w), g_->boundary_a2.index_of(y));
}

double DensityModel::f_a1(const Pt &w0, const Pt &y0) const {
    int iy0 = g_->v.index_of(y0);
    return kgp_(g_->boundary_a1.index_of(w0), iy0) / kgdiag_[iy0];
}

double DensityModel::kg_pair(const Pt &w0, const Pt &y0) const {
    return kgp_(g_->boundary_a1.index_of(w0), g_->v.index_of(y0));
}

double DensityModel::no_return_mass(const Pt &y0) const {
    return q_.row(g_->v.index_of(y0)).sum();
}

const std::vector<float> &DensityModel::kg_column(int iy0) const {
    auto it = col_cache_.find(iy0);
    if (it != col_cache_.end()) return it->second;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dom_->size());
    rhs[dom_->verts().index_of(g_->v.points()[iy0])] = 1.0;
    Eigen::VectorXd col = factor_->solve(rhs);
    std::vector<float> f(col.size());
    for (int i = 0; i < col.size(); ++i) f[i] = static_cast<float>(std::max(0.0, col[i]));
    return col_cache_.emplace(iy0, std::move(f)).first->second;
}

Path DensityModel::sample_excursion_exact(const Pt &w0, const Pt &y0, Rng &rng,
                                          long long step_cap) const {
    const int d = g_->d;
    int iy0 = g_->v.index_of(y0);
    if (f_a1(w0, y0) <= 0) throw std::domain_error("pair has zero probability");
    const std::vector<float> &col = kg_column(iy0);
    const FiniteSet &verts = dom_->verts();

    Path path;
    path.v.push_back(w0);
    long long steps = 0;
    // h-transform step: neighbor z chosen with weight KG(z, y0)
    auto cond_step = [&](const Pt &x) {
        double wsum = 0;
        std::array<double, 2 * kMaxDim> wts{};
        std::array<Pt, 2 * kMaxDim> nbrs;
        int k = 0;
        for_neighbors(x, d, [&](const Pt &z) {
            double wz = verts.contains(z) ? double(col[verts.index_of(z)]) : 0.0;
            wts[k] = wz;
            nbrs[k] = z;
            wsum += wz;
            ++k;
        });
        double t = rng.u01() * wsum;
        for (int i = 0; i < k; ++i) {
            t -= wts[i];
            if (t <= 0) return nbrs[i];
        }
        return nbrs[k - 1];
    };
    auto walk_to_y0 = [&](Pt x) {
        while (!(x == y0)) {
            if (++steps > step_cap) throw WalkTimeout(path);
            x = cond_step(x);
            path.v.push_back(x);
        }
    };
    walk_to_y0(w0);

    // geometric number of conditioned returns to y0
    double rho = 1.0 - 1.0 / kgdiag_[iy0];
    while (rng.u01() < rho) {
        Pt z = cond_step(y0);
        path.v.push_back(z);
        walk_to_y0(z);
    }
    return path;
}

Path DensityModel::sample_excursion_given_endpoints(const Pt &w0, const Pt &y0, Rng &rng,
                                                    int max_attempts,
                                                    long long step_cap) const {
    const int d = g_->d;
    if (f_a1(w0, y0) <= 0) throw std::domain_error("pair has zero probability");
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Path path;
        path.v.push_back(w0);
        Pt x = w0;
        int last_v = -1;
        long long steps = 0;
        while (g_->grid.in_a2c(x)) {
            if (++steps > step_cap) throw WalkTimeout(path);
            uint32_t mv = rng.below(static_cast<uint32_t>(2 * d));
            x.c[mv >> 1] += (mv & 1) ? 1 : -1;
            path.v.push_back(x);
            if (g_->grid.at(x) == Region::V) last_v = static_cast<int>(path.v.size()) - 1;
        }
        if (last_v >= 0 && path.v[last_v] == y0) {
            path.v.resize(last_v + 1);
            return path;
        }
    }
    throw RareEventError("conditional excursion rejection cap exceeded; "
                         "use the exact h-transform sampler for this pair");
}

DensityNeighborhood alpha_ell(const DensityModel &m, const Pt &w0, const Pt &y0, double c4,
                              int subsample, uint64_t seed) {
    if (c4 <= 0 || c4 >= 1) throw std::invalid_argument("c4 must lie in (0,1)");
    const GeometryTriple &g = m.geom();
    DensityNeighborhood out;
    out.w0 = w0;
    out.y0 = y0;
    out.subsample = subsample;
    int ic_w0 = g.boundary_a1.index_of(w0), ic_y0 = g.v.index_of(y0);
    double rad = c4 * g.s;
    std::vector<int> near_w0, near_y0;
    for (int i = 0; i < g.boundary_a1.size(); ++i)
        if (euclid(sub(g.boundary_a1.points()[i], w0, g.d), g.d) <= rad) near_w0.push_back(i);
    for (int i = 0; i < g.v.size(); ++i)
        if (euclid(sub(g.v.points()[i], y0, g.d), g.d) <= rad) near_y0.push_back(i);
    for (int iw : near_w0)
        for (int iy : near_y0) out.gamma.emplace_back(iw, iy);

    const auto &a = m.a_hit();
    const auto &kgp = m.kg_pairs();
    const auto &q = m.q_exit();
    const auto &e = m.exit_law();
    Rng rng(seed, 0xa1fae11ull);
    double alpha = 1.0, ell = 0.0;
    for (int t = 0; t < subsample; ++t) {
        int iw = static_cast<int>(rng.below(static_cast<uint32_t>(g.v.size())));
        int iy = static_cast<int>(rng.below(static_cast<uint32_t>(g.boundary_a2.size())));
        double ex = e(iw, iy);
        if (ex <= 0) continue;
        double center = a(iw, ic_w0) * kgp(ic_w0, ic_y0) * q(ic_y0, iy) / ex;
        ell = std::max(ell, center);
        if (center <= 0) continue;
        for (auto [iw0p, iy0p] : out.gamma) {
            double gp = a(iw, iw0p) * kgp(iw0p, iy0p) * q(iy0p, iy) / ex;
            alpha = std::min(alpha, gp / center);
        }
    }
    out.alpha = alpha;
    out.ell = ell;
    return out;
}

} // namespace rilab
