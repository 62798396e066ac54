#ifndef RILAB_POINT_HPP
#define RILAB_POINT_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rilab {

// Lattice points carry up to kMaxDim coordinates; the effective dimension d is
// held by whichever structure owns the points.  Unused slots stay zero so that
// hashing and comparison can run over the full array.
constexpr int kMaxDim = 6;

struct Pt {
    std::array<int, kMaxDim> c{};

    int &operator[](int i) { return c[i]; }
    int operator[](int i) const { return c[i]; }
    bool operator==(const Pt &o) const { return c == o.c; }
    bool operator!=(const Pt &o) const { return c != o.c; }
    bool operator<(const Pt &o) const { return c < o.c; }
};

inline Pt make_pt(std::initializer_list<int> v) {
    Pt p;
    int i = 0;
    for (int x : v) p.c[i++] = x;
    return p;
}

struct PtHash {
    size_t operator()(const Pt &p) const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (int i = 0; i < kMaxDim; ++i) {
            h ^= static_cast<uint64_t>(static_cast<uint32_t>(p.c[i]));
            h *= 0x100000001b3ull;
        }
        return static_cast<size_t>(h);
    }
};

inline long long norm2(const Pt &p, int d) {
    long long s = 0;
    for (int i = 0; i < d; ++i) s += 1ll * p.c[i] * p.c[i];
    return s;
}

inline double euclid(const Pt &p, int d) { return std::sqrt(double(norm2(p, d))); }

inline int linf(const Pt &p, int d) {
    int m = 0;
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(p.c[i]));
    return m;
}

inline Pt sub(const Pt &a, const Pt &b, int d) {
    Pt r;
    for (int i = 0; i < d; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

inline Pt add(const Pt &a, const Pt &b, int d) {
    Pt r;
    for (int i = 0; i < d; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

// euclidean / linf distance pair, as exposed by the CLI and tests
struct DistPair {
    double euclidean;
    int linf;
};

inline DistPair distances(const Pt &a, const Pt &b, int d) {
    Pt r = sub(a, b, d);
    return {euclid(r, d), linf(r, d)};
}

// Walks the 2d nearest neighbors of p.
template <typename F>
inline void for_neighbors(const Pt &p, int d, F &&f) {
    for (int i = 0; i < d; ++i) {
        Pt q = p;
        q.c[i] = p.c[i] + 1;
        f(q);
        q.c[i] = p.c[i] - 1;
        f(q);
    }
}

} // namespace rilab

#endif
