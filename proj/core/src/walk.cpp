#include "rilab/walk.hpp"

namespace rilab {

Path run_until(const Pt &start, int d, const std::function<bool(const Pt &)> &stop,
               long long step_cap, Rng &rng) {
    Path p;
    p.v.push_back(start);
    if (stop(start)) return p;
    Pt x = start;
    for (long long k = 0; k < step_cap; ++k) {
        uint32_t mv = rng.below(static_cast<uint32_t>(2 * d));
        int axis = static_cast<int>(mv >> 1);
        x.c[axis] += (mv & 1) ? 1 : -1;
        p.v.push_back(x);
        if (stop(x)) return p;
    }
    throw WalkTimeout(std::move(p));
}

ExcursionRecord excursion_decompose(const Path &path, const GeometryTriple &g) {
    if (path.v.empty() || g.grid.at(path.v.front()) != Region::V)
        throw std::domain_error("excursion_decompose: path must start in V");

    ExcursionRecord rec;
    rec.path = path;
    rec.d_times.push_back(0);
    const int n = static_cast<int>(path.v.size());
    int t = 0;
    while (true) {
        // scan the excursion [D_k, R_{k+1})
        int dk = rec.d_times.back();
        EndpointPair pair;
        Pt last_v = path.v[dk];
        int rk = -1;
        for (t = dk; t < n; ++t) {
            Region rg = g.grid.at(path.v[t]);
            if (rg == Region::A2Bound || rg == Region::A2Far) {
                rk = t;
                break;
            }
            if (rg == Region::A1 && pair.theta) {
                pair.theta = false;
                pair.w0 = path.v[t];
            }
            if (rg == Region::V) last_v = path.v[t];
        }
        if (rk < 0) break; // incomplete trailing segment, no pair recorded
        pair.y0 = last_v;
        rec.r_times.push_back(rk);
        rec.endpoint_pairs.push_back(pair);
        // next D: first V visit after R
        int dn = -1;
        for (t = rk; t < n; ++t)
            if (g.grid.at(path.v[t]) == Region::V) {
                dn = t;
                break;
            }
        if (dn < 0) break;
        rec.d_times.push_back(dn);
    }
    return rec;
}

BridgeField make_exit_field(const LatticeDomain &a2c_domain, const LatticeFactor &factor,
                            const Pt &exit_vertex) {
    const int d = a2c_domain.dim(), twod = 2 * d;
    BridgeField f;
    f.domain = &a2c_domain;
    f.target = exit_vertex;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(a2c_domain.size());
    for_neighbors(exit_vertex, d, [&](const Pt &q) {
        if (a2c_domain.verts().contains(q)) b[a2c_domain.verts().index_of(q)] += 1.0 / twod;
    });
    f.h = factor.solve(b);
    return f;
}

Path sample_exit_bridge(const Pt &w, const BridgeField &field, Rng &rng, long long step_cap) {
    const LatticeDomain &dom = *field.domain;
    const int d = dom.dim();
    if (!dom.verts().contains(w)) throw std::domain_error("bridge start outside domain");
    if (field.value(w) <= 0.0) throw std::domain_error("bridge endpoint pair has zero probability");

    Path p;
    p.v.push_back(w);
    Pt x = w;
    double weights[2 * kMaxDim];
    Pt nbrs[2 * kMaxDim];
    for (long long k = 0; k < step_cap; ++k) {
        int m = 0;
        double tot = 0;
        for_neighbors(x, d, [&](const Pt &q) {
            double h = field.value(q);
            nbrs[m] = q;
            weights[m] = h;
            tot += h;
            ++m;
        });
        double u = rng.u01() * tot;
        int pick = 0;
        for (; pick < m - 1; ++pick) {
            u -= weights[pick];
            if (u <= 0) break;
        }
        x = nbrs[pick];
        p.v.push_back(x);
        if (x == field.target) return p;
    }
    throw WalkTimeout(std::move(p));
}

std::optional<Pt> decide_return_to(const Pt &x, const EquilibriumMeasure &eq,
                                   const GreenTable &green, Rng &rng) {
    if (eq.support.size() == 0) return std::nullopt;
    double p_ret = return_probability(x, eq, green);
    if (rng.u01() >= p_ret) return std::nullopt;
    return eq.sample(rng);
}

} // namespace rilab
