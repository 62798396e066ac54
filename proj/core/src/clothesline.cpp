#include "rilab/clothesline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace rilab {

namespace {

long long escape_radius2(long long rad, int factor) {
    long long rb = std::max<long long>(factor * rad, 20);
    return rb * rb;
}

long long max_radius(const FiniteSet &s) {
    long long m = 0;
    for (const Pt &p : s.points()) m = std::max(m, norm2(p, s.dim()));
    return static_cast<long long>(std::ceil(std::sqrt(double(m)))) + 2;
}

// walk from `from` until the predicate holds, deciding escapes against eq at
// the far sphere; re-entry through the normalized equilibrium measure carries
// the documented far-field bias
template <typename Hit>
std::optional<Pt> walk_to(const Pt &from, int d, Hit &&hit, const EquilibriumMeasure &eq,
                          const GreenTable &green, long long r_big2, long long step_cap,
                          Rng &rng) {
    Pt x = from;
    long long r2 = norm2(x, d), steps = 0;
    while (true) {
        if (++steps > step_cap) throw WalkTimeout(Path{});
        uint32_t mv = rng.below(static_cast<uint32_t>(2 * d));
        int axis = static_cast<int>(mv >> 1);
        int dir = (mv & 1) ? 1 : -1;
        r2 += 2ll * dir * x.c[axis] + 1;
        x.c[axis] += dir;
        if (hit(x)) return x;
        if (r2 >= r_big2) {
            auto back = decide_return_to(x, eq, green, rng);
            if (!back) return std::nullopt;
            if (hit(*back)) return *back;
            // eq support need not satisfy the predicate (e.g. a K1 visit while
            // walking toward K2); keep walking from the re-entry point
            x = *back;
            r2 = norm2(x, d);
        }
    }
}

} // namespace

ClotheslineContext make_clothesline_context(const GeometryTriple &g, const GreenTable &green,
                                            int r_big_factor, long long step_cap) {
    ClotheslineContext ctx;
    ctx.g = &g;
    ctx.green = &green;
    ctx.eq_v = equilibrium_measure(g.v, green);
    ctx.r_big2 = escape_radius2(g.r + 2ll * g.s, r_big_factor);
    ctx.step_cap = step_cap;
    return ctx;
}

ClotheslineRealization sample_clothesline(const ClotheslineContext &ctx,
                                          const ClotheslineStart &start, Rng &rng) {
    const GeometryTriple &g = *ctx.g;
    const int d = g.d;
    auto in_v = [&](const Pt &p) { return g.grid.at(p) == Region::V; };

    ClotheslineRealization out;
    Pt w{};
    switch (start.kind) {
    case ClotheslineStart::Equilibrium:
        w = ctx.eq_v.sample(rng);
        break;
    case ClotheslineStart::FixedPoint:
        w = start.point;
        break;
    case ClotheslineStart::HittingFrom: {
        auto hitv = walk_to(start.point, d, in_v, ctx.eq_v, *ctx.green, ctx.r_big2,
                            ctx.step_cap, rng);
        if (!hitv) return out; // cemetery start
        w = *hitv;
        break;
    }
    }

    while (true) {
        // V to A2 never escapes: A2 surrounds everything reachable
        Pt x = w;
        long long steps = 0;
        while (g.grid.in_a2c(x)) {
            if (++steps > ctx.step_cap) throw WalkTimeout(Path{});
            uint32_t mv = rng.below(static_cast<uint32_t>(2 * d));
            x.c[mv >> 1] += (mv & 1) ? 1 : -1;
        }
        out.pairs.push_back({w, x});
        auto back = walk_to(x, d, in_v, ctx.eq_v, *ctx.green, ctx.r_big2, ctx.step_cap, rng);
        if (!back) {
            out.t_delta = static_cast<int>(out.pairs.size());
            return out;
        }
        w = *back;
    }
}

ClothPair make_cloth_pair(const FiniteSet &k1, const FiniteSet &k2, const GreenTable &green,
                          int r_big_factor, long long step_cap) {
    ClothPair cp;
    cp.eq1 = equilibrium_measure(k1, green);
    cp.eq2 = equilibrium_measure(k2, green);
    cp.r_big2 = escape_radius2(std::max(max_radius(k1), max_radius(k2)), r_big_factor);
    cp.step_cap = step_cap;
    return cp;
}

GeneralizedClothesline sample_cloth_u(const ClothPair &cp, double u, const GreenTable &green,
                                      Rng &rng) {
    GeneralizedClothesline out;
    out.u = u;
    if (u <= 0) return out;
    const int d = cp.eq1.support.dim();
    int n = rng.poisson(u * cp.eq1.total);
    for (int j = 0; j < n; ++j) {
        std::vector<Pt> trace;
        trace.push_back(cp.eq1.sample(rng));
        bool to_k2 = true;
        while (true) {
            const EquilibriumMeasure &eq = to_k2 ? cp.eq2 : cp.eq1;
            const FiniteSet &tgt = eq.support;
            auto hit = walk_to(trace.back(), d, [&](const Pt &p) { return tgt.contains(p); },
                               eq, green, cp.r_big2, cp.step_cap, rng);
            if (!hit) break;
            trace.push_back(*hit);
            to_k2 = !to_k2;
        }
        out.traces.push_back(std::move(trace));
    }
    return out;
}

GeneralizedClothesline sample_cloth_u(const FiniteSet &k1, const FiniteSet &k2, double u,
                                      const GreenTable &green, Rng &rng, int r_big_factor,
                                      long long step_cap) {
    return sample_cloth_u(make_cloth_pair(k1, k2, green, r_big_factor, step_cap), u, green, rng);
}

} // namespace rilab
