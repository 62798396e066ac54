#include "rilab/geometry.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace rilab {

FiniteSet::FiniteSet(std::vector<Pt> pts, int dim) : pts_(std::move(pts)), dim_(dim) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    idx_.reserve(pts_.size() * 2);
    for (size_t i = 0; i < pts_.size(); ++i) idx_[pts_[i]] = static_cast<int>(i);
}

int FiniteSet::index_of(const Pt &p) const {
    auto it = idx_.find(p);
    if (it == idx_.end()) throw std::out_of_range("point not in set");
    return it->second;
}

FiniteSet boundary(const FiniteSet &a) {
    std::vector<Pt> out;
    for (const Pt &p : a.points()) {
        bool b = false;
        for_neighbors(p, a.dim(), [&](const Pt &q) {
            if (!b && !a.contains(q)) b = true;
        });
        if (b) out.push_back(p);
    }
    return FiniteSet(std::move(out), a.dim());
}

LabelGrid::LabelGrid(int ext, int dim) : ext_(ext), dim_(dim) {
    long long n = 1;
    for (int k = 0; k < dim; ++k) n *= 2 * ext + 1;
    labels_.assign(n, static_cast<uint8_t>(Region::A2Far));
}

Shape shape_from_string(const std::string &s) {
    if (s == "ball") return Shape::Ball;
    if (s == "smoothed_cube" || s == "cube") return Shape::SmoothedCube;
    throw std::invalid_argument("unknown shape: " + s);
}

std::string to_string(Shape s) { return s == Shape::Ball ? "ball" : "smoothed_cube"; }

namespace {

// all lattice offsets with |o| <= radius, sorted by norm so membership scans
// exit early for points close to the set
std::vector<Pt> offsets_within(double radius, int d) {
    std::vector<Pt> out;
    int m = static_cast<int>(radius);
    double r2 = radius * radius;
    Pt o{};
    std::function<void(int)> rec = [&](int k) {
        if (k == d) {
            if (norm2(o, d) <= r2) out.push_back(o);
            return;
        }
        for (int c = -m; c <= m; ++c) {
            o.c[k] = c;
            rec(k + 1);
        }
        o.c[k] = 0;
    };
    rec(0);
    std::sort(out.begin(), out.end(), [&](const Pt &a, const Pt &b) {
        return norm2(a, d) < norm2(b, d);
    });
    return out;
}

struct CubeCore {
    int lo, hi; // per-axis range of the centered hypercube, floored centering
};

CubeCore cube_core(int edge) {
    int lo = -(edge / 2);
    return {lo, lo + edge - 1};
}

// squared euclidean distance from x to the (filled) hypercube, via clamping
long long dist2_to_cube(const Pt &x, CubeCore h, int d) {
    long long s = 0;
    for (int i = 0; i < d; ++i) {
        int c = std::clamp(x.c[i], h.lo, h.hi);
        s += 1ll * (x.c[i] - c) * (x.c[i] - c);
    }
    return s;
}

} // namespace

GeometryTriple build_geometry(Shape shape, int r, int s, int d, long long budget) {
    if (d < 3 || d > kMaxDim) throw std::invalid_argument("dimension must be in [3," + std::to_string(kMaxDim) + "]");
    if (s < 1 || s >= r) throw std::invalid_argument("need 1 <= s < r");

    GeometryTriple g;
    g.shape = shape;
    g.r = r;
    g.s = s;
    g.d = d;

    // membership in a1 as a predicate; ball uses strict dist(x,0) < r, cube is
    // the s-dilation of the centered hypercube of edge r-s
    CubeCore core = cube_core(r - s);
    auto in_a1 = [&](const Pt &p) {
        if (shape == Shape::Ball) return norm2(p, d) < 1ll * r * r;
        return dist2_to_cube(p, core, d) <= 1ll * s * s;
    };

    int ext = (shape == Shape::Ball ? r : (r - s) / 2 + 1 + s) + 2 * s + 2;
    {
        long long cells = 1;
        for (int k = 0; k < d; ++k) cells *= 2ll * ext + 1;
        if (cells > 64 * budget) throw std::length_error("geometry bounding box exceeds budget");
    }

    auto offs_s = offsets_within(s, d);
    auto offs_2s = offsets_within(2 * s, d);
    auto near_a1 = [&](const Pt &p, const std::vector<Pt> &offs) {
        for (const Pt &o : offs)
            if (in_a1(add(p, o, d))) return true;
        return false;
    };

    std::vector<Pt> a1_pts, dil1_pts, a2c_pts;
    Pt p{};
    std::function<void(int)> sweep = [&](int k) {
        if (k == d) {
            if (in_a1(p)) {
                a1_pts.push_back(p);
                dil1_pts.push_back(p);
                a2c_pts.push_back(p);
            } else if (near_a1(p, offs_s)) {
                dil1_pts.push_back(p);
                a2c_pts.push_back(p);
            } else if (near_a1(p, offs_2s)) {
                a2c_pts.push_back(p);
            }
            return;
        }
        for (int c = -ext; c <= ext; ++c) {
            p.c[k] = c;
            sweep(k + 1);
        }
        p.c[k] = 0;
    };
    sweep(0);

    if (static_cast<long long>(a2c_pts.size()) > budget)
        throw std::length_error("a2_complement has " + std::to_string(a2c_pts.size()) +
                                " points, over budget " + std::to_string(budget));

    g.a1 = FiniteSet(std::move(a1_pts), d);
    FiniteSet dil1(std::move(dil1_pts), d);
    g.v = boundary(dil1);
    g.a2_complement = FiniteSet(std::move(a2c_pts), d);
    g.boundary_a1 = boundary(g.a1);

    std::vector<Pt> ba2;
    for (const Pt &q : g.a2_complement.points()) {
        for_neighbors(q, d, [&](const Pt &n) {
            if (!g.a2_complement.contains(n)) ba2.push_back(n);
        });
    }
    g.boundary_a2 = FiniteSet(std::move(ba2), d);

    g.grid = LabelGrid(ext, d);
    for (const Pt &q : g.a2_complement.points()) g.grid.set(q, Region::Mid);
    for (const Pt &q : g.a1.points()) g.grid.set(q, Region::A1);
    for (const Pt &q : g.v.points()) g.grid.set(q, Region::V);
    for (const Pt &q : g.boundary_a2.points()) g.grid.set(q, Region::A2Bound);

    if (shape == Shape::SmoothedCube) {
        CubeCore outer = cube_core(r + 2 * s);
        std::vector<Pt> hp;
        Pt q{};
        std::function<void(int)> fill = [&](int k) {
            if (k == d) {
                hp.push_back(q);
                return;
            }
            for (int c = outer.lo; c <= outer.hi; ++c) {
                q.c[k] = c;
                fill(k + 1);
            }
            q.c[k] = 0;
        };
        fill(0);
        g.h_unsmoothed = FiniteSet(std::move(hp), d);
    }
    return g;
}

bool separation_holds(const GeometryTriple &g) {
    // flood from a1 through a2_complement \ v; separation fails iff the flood
    // touches a point with a neighbor outside a2_complement
    std::unordered_map<Pt, bool, PtHash> seen;
    std::deque<Pt> q;
    for (const Pt &p : g.a1.points()) {
        seen[p] = true;
        q.push_back(p);
    }
    while (!q.empty()) {
        Pt p = q.front();
        q.pop_front();
        bool escapes = false;
        for_neighbors(p, g.d, [&](const Pt &n) {
            Region rg = g.grid.at(n);
            if (rg == Region::A2Bound || rg == Region::A2Far) escapes = true;
            if ((rg == Region::A1 || rg == Region::Mid) && !seen.count(n)) {
                seen[n] = true;
                q.push_back(n);
            }
        });
        if (escapes) return false;
    }
    return true;
}

bool smoothed_frontier_holds(const GeometryTriple &g) {
    if (g.shape != Shape::SmoothedCube) return true;
    CubeCore core = cube_core(g.r - g.s);
    for (const Pt &x : g.boundary_a1.points())
        if (dist2_to_cube(x, core, g.d) > 1ll * g.s * g.s) return false;
    return true;
}

} // namespace rilab
