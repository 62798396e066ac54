#include "doctest.h"

#include <cmath>

#include "rilab/clothesline.hpp"
#include "rilab/densities.hpp"
#include "rilab/factored_slt.hpp"
#include "rilab/slt.hpp"

using namespace rilab;

namespace {

const GeometryTriple &geom() {
    static GeometryTriple g = build_geometry(Shape::Ball, 4, 2, 3);
    return g;
}

const DensityModel &model() {
    static DensityModel m(geom());
    return m;
}

const FactorTables &tables() {
    static FactorTables t = make_factor_tables(model());
    return t;
}

// a fixed source itinerary with every index in range
std::vector<std::pair<int, int>> itinerary(int n, uint64_t seed) {
    Rng rng(seed, 40);
    std::vector<std::pair<int, int>> out;
    for (int k = 0; k < n; ++k)
        out.emplace_back(rng.below(geom().v.size()), rng.below(geom().boundary_a2.size()));
    return out;
}

} // namespace

TEST_CASE("factored sheet realizes the same heights as the generic sheet") {
    const auto &t = tables();
    FactoredSheet fs(t.n_atoms, 77, 3);
    AtomSpace space{std::vector<double>(t.n_atoms, 1.0)};
    PoissonSheet ps(space, 77, 3);
    for (int a : {0, 1, t.n_atoms / 2, t.n_atoms - 1}) {
        CHECK(fs.first()[a] == doctest::Approx(ps.height(a, 0)).epsilon(1e-6));
        double h2 = fs.gap(a, 0) + fs.gap(a, 1);
        CHECK(h2 == doctest::Approx(ps.height(a, 1)).epsilon(1e-12));
    }
}

TEST_CASE("factored process replays the generic engine") {
    const auto &t = tables();
    const auto &m = model();
    const auto &g = geom();
    FactoredSheet fs(t.n_atoms, 91, 0);
    AtomSpace space{std::vector<double>(t.n_atoms, 1.0)};
    PoissonSheet ps(space, 91, 0);

    FactoredProcess fp(t, fs);
    SltState st(ps);
    for (auto [iw, iy] : itinerary(25, 5)) {
        if (m.exit_prob(g.v.points()[iw], g.boundary_a2.points()[iy]) <= 0) continue;
        SltStep a = fp.step(iw, iy);
        SltStep b = st.step(m.density(g.v.points()[iw], g.boundary_a2.points()[iy]));
        CHECK(a.chosen == b.chosen);
        CHECK(a.xi == doctest::Approx(b.xi).epsilon(1e-3));
    }
    for (int a : {0, t.n_atoms / 3, t.n_atoms - 1})
        CHECK(double(fp.g()[a]) == doctest::Approx(st.g_accum()[a]).epsilon(1e-3));
    CHECK(fp.used().size() == st.used().size());
    for (size_t k = 0; k < fp.used().size(); ++k) CHECK(fp.used()[k] == st.used()[k]);
}

TEST_CASE("snapshot prefix is dominated by the continued process") {
    const auto &t = tables();
    FactoredSheet fs(t.n_atoms, 13, 1);
    FactoredProcess fp(t, fs);
    auto route = itinerary(16, 9);
    for (int k = 0; k < 6; ++k) fp.step(route[k].first, route[k].second);
    FactoredProcess snap = fp; // prefix snapshot
    for (int k = 6; k < 16; ++k) fp.step(route[k].first, route[k].second);

    auto dom = factored_dominance(snap, fp);
    CHECK(dom.dominated);
    auto rev = factored_dominance(fp, snap);
    CHECK(!rev.dominated);
    CHECK(rev.witness >= 0);
    // consumed prefixes nest
    for (auto [a, j] : snap.used()) CHECK(j < fp.consumed(a));
}
