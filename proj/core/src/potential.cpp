#include "rilab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rilab {

std::vector<double> dirichlet_hitting(const LatticeDomain &domain,
                                      const std::vector<FiniteSet> &classes,
                                      const Pt &start, double tol) {
    const int d = domain.dim(), twod = 2 * d;
    // start already absorbed: unit mass on its class
    for (size_t c = 0; c < classes.size(); ++c)
        if (classes[c].contains(start)) {
            std::vector<double> out(classes.size(), 0.0);
            out[c] = 1.0;
            return out;
        }
    int sv = domain.verts().index_of(start);

    const int n = domain.size();
    std::vector<double> out;
    out.reserve(classes.size());
    // factor once when several classes are requested on a small domain
    std::unique_ptr<LatticeFactor> factor;
    if (classes.size() > 2) factor = std::make_unique<LatticeFactor>(domain);
    for (const FiniteSet &cls : classes) {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        for (int v = 0; v < n; ++v) {
            int hits = 0;
            for_neighbors(domain.point(v), d, [&](const Pt &q) {
                if (!domain.verts().contains(q) && cls.contains(q)) ++hits;
            });
            if (hits) b[v] = double(hits) / twod;
        }
        Eigen::VectorXd u = factor ? factor->solve(b) : solve_dirichlet(domain, b, tol);
        out.push_back(u[sv]);
    }
    return out;
}

Eigen::VectorXd killed_green_column(const LatticeFactor &factor, const LatticeDomain &domain,
                                    const Pt &source) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(domain.size());
    b[domain.verts().index_of(source)] = 1.0;
    return factor.solve(b);
}

Eigen::MatrixXd killed_green(const LatticeDomain &domain) {
    const int n = domain.size();
    if (n > 5000) throw std::length_error("killed_green: dense matrix over budget");
    Eigen::MatrixXd a(Eigen::MatrixXd(domain.system_matrix()));
    return a.llt().solve(Eigen::MatrixXd::Identity(n, n));
}

const Pt &EquilibriumMeasure::sample(Rng &rng) const {
    double u = rng.u01() * total;
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    size_t i = std::min(static_cast<size_t>(it - cumulative.begin()), cumulative.size() - 1);
    return support.points()[i];
}

EquilibriumMeasure equilibrium_measure(const FiniteSet &a, const GreenTable &green) {
    const int n = a.size(), d = a.dim();
    EquilibriumMeasure eq;
    eq.support = a;
    if (n == 0) return eq;
    if (n > 5000) throw std::length_error("last-exit system over budget (|A| > 5000)");
    Eigen::MatrixXd gm(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double v = green(sub(a.points()[i], a.points()[j], d));
            gm(i, j) = v;
            gm(j, i) = v;
        }
    Eigen::VectorXd e = gm.llt().solve(Eigen::VectorXd::Ones(n));
    eq.weights.assign(e.data(), e.data() + n);
    eq.cumulative.resize(n);
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        acc += std::max(0.0, eq.weights[i]);
        eq.cumulative[i] = acc;
    }
    eq.total = 0;
    for (double w : eq.weights) eq.total += w;
    return eq;
}

CapacityResult capacity_last_exit(const FiniteSet &a, const GreenTable &green) {
    if (a.size() == 0) return {0.0, 0.0};
    EquilibriumMeasure eq = equilibrium_measure(a, green);
    return {eq.total, 1e-8};
}

double return_probability(const Pt &x, const EquilibriumMeasure &eq, const GreenTable &green) {
    double p = 0;
    for (size_t i = 0; i < eq.weights.size(); ++i)
        p += green.at(x, eq.support.points()[i]) * eq.weights[i];
    if (p > 1.0 + 1e-9) throw std::runtime_error("return probability above 1: oracle inconsistency");
    return std::min(p, 1.0);
}

CapacityResult capacity_mc_escape(const FiniteSet &a, const GreenTable &green,
                                  long long walks_per_point, int truncation_radius,
                                  uint64_t seed) {
    if (a.size() == 0) return {0.0, 0.0};
    const int d = a.dim();
    EquilibriumMeasure eq = equilibrium_measure(a, green);
    FiniteSet bd = boundary(a);

    long long rad2 = 0;
    for (const Pt &p : a.points()) rad2 = std::max(rad2, norm2(p, d));
    long long r2cap = 1ll * truncation_radius * truncation_radius;
    if (r2cap <= rad2 * 4) r2cap = rad2 * 4 + 100;

    double cap = 0, var = 0;
    int stream = 0;
    for (const Pt &x : bd.points()) {
        Rng rng(seed, 0xe5c4 + stream++);
        double sum = 0, sumsq = 0;
        for (long long w = 0; w < walks_per_point; ++w) {
            Pt z = x;
            long long r2 = norm2(z, d);
            double esc = 0; // contribution of this trial
            while (true) {
                uint32_t mv = rng.below(static_cast<uint32_t>(2 * d));
                int axis = static_cast<int>(mv >> 1);
                int dir = (mv & 1) ? 1 : -1;
                r2 += 2ll * dir * z.c[axis] + 1;
                z.c[axis] += dir;
                if (a.contains(z)) break; // returned
                if (r2 >= r2cap) {
                    esc = 1.0 - return_probability(z, eq, green);
                    break;
                }
            }
            sum += esc;
            sumsq += esc * esc;
        }
        double m = sum / walks_per_point;
        cap += m;
        var += std::max(0.0, sumsq / walks_per_point - m * m) / walks_per_point;
    }
    return {cap, 3.0 * std::sqrt(var)};
}

} // namespace rilab
