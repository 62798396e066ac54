#include "doctest.h"

#include <cmath>

#include "rilab/clothesline.hpp"
#include "rilab/densities.hpp"
#include "rilab/slt.hpp"
#include "rilab/stats.hpp"

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

const GreenTable &green3() {
    static GreenTable g(3);
    return g;
}

int octant(const Pt &p) {
    return (p.c[0] > 0 ? 4 : 0) + (p.c[1] > 0 ? 2 : 0) + (p.c[2] > 0 ? 1 : 0);
}

// endpoint pair of one w -> y excursion path, from the region labels
int path_cell(const std::vector<Pt> &path, const GeometryTriple &g, int theta_cell) {
    int first_a1 = -1, last_v = -1;
    for (size_t i = 0; i < path.size(); ++i) {
        Region r = g.grid.at(path[i]);
        if (r == Region::A1 && first_a1 < 0) first_a1 = static_cast<int>(i);
        if (r == Region::V) last_v = static_cast<int>(i);
    }
    if (first_a1 < 0) return theta_cell;
    return octant(path[first_a1]) * 8 + octant(path[last_v]);
}

} // namespace

TEST_CASE("density rows are probability vectors") {
    const auto &m = model();
    Rng rng(21, 1);
    for (int t = 0; t < 4; ++t) {
        Pt w = geom().v.points()[rng.below(geom().v.size())];
        Pt y = geom().boundary_a2.points()[rng.below(geom().boundary_a2.size())];
        if (m.exit_prob(w, y) <= 0) continue;
        auto dens = m.density(w, y);
        double sum = 0;
        for (double v : dens) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        // Theta computed two independent ways: complement vs direct solve
        CHECK(std::abs(dens.back() - m.theta_mass(w, y)) < 1e-9);
    }
}

TEST_CASE("exit law rows sum to one") {
    const auto &m = model();
    for (int iw : {0, 7, 23}) {
        Pt w = geom().v.points()[iw];
        double sum = 0;
        for (const Pt &y : geom().boundary_a2.points()) sum += m.exit_prob(w, y);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("v-avoiding exit law is reversible") {
    const auto &m = model();
    const GeometryTriple &g = geom();
    std::vector<Pt> d2pts;
    for (const Pt &p : g.a2_complement.points())
        if (!g.v.contains(p)) d2pts.push_back(p);
    LatticeDomain d2(d2pts, 3);

    int checked = 0;
    for (int iy0 : {0, 11, 40}) {
        for (int iy : {0, 17, 59}) {
            Pt y0 = g.v.points()[iy0], y = g.boundary_a2.points()[iy];
            double fwd = m.q_exit()(iy0, iy);
            if (fwd < 1e-12) continue;
            // reverse reading: from y, hit V first at y0 without touching A2
            double rev = 0;
            for_neighbors(y, 3, [&](const Pt &z) {
                if (z == y0) rev += 1.0 / 6;
                if (d2.verts().contains(z))
                    rev += dirichlet_hitting(d2, {FiniteSet({y0}, 3)}, z)[0] / 6;
            });
            CHECK(std::abs(fwd - rev) < 1e-8);
            ++checked;
        }
    }
    CHECK(checked >= 3);
}

TEST_CASE("f_a1 values are nondegenerate probabilities") {
    GeometryTriple tiny = build_geometry(Shape::Ball, 3, 1, 3);
    DensityModel mt(tiny);
    Pt w0 = tiny.boundary_a1.points()[0];
    Pt y0 = tiny.v.points()[0];
    double f = mt.f_a1(w0, y0);
    CHECK(f > 0.0);
    CHECK(f < 1.0);
    const auto &m = model();
    for (int i : {0, 5, 17}) {
        double fv = m.f_a1(geom().boundary_a1.points()[i], geom().v.points()[2 * i]);
        CHECK(fv > 0.0);
        CHECK(fv <= 1.0);
    }
}

TEST_CASE("bridge-sampled endpoint frequencies match the exact table") {
    const auto &m = model();
    const GeometryTriple &g = geom();
    LatticeDomain dom(g.a2_complement.points(), 3);
    LatticeFactor factor(dom);
    Pt w = g.v.points()[3];
    Pt y = g.boundary_a2.points()[10];
    REQUIRE(m.exit_prob(w, y) > 1e-6);
    BridgeField field = make_exit_field(dom, factor, y);

    const int theta_cell = 64;
    std::vector<double> probs(65, 0.0);
    auto dens = m.density(w, y);
    for (int atom = 0; atom < m.space().n_pairs; ++atom) {
        if (dens[atom] == 0) continue;
        Pt w0 = g.boundary_a1.points()[m.space().w0_of(atom)];
        Pt y0 = g.v.points()[m.space().y0_of(atom)];
        probs[octant(w0) * 8 + octant(y0)] += dens[atom];
    }
    probs[theta_cell] = dens.back();

    Rng rng(21, 5);
    std::vector<long long> counts(65, 0);
    const int n = 20000;
    for (int t = 0; t < n; ++t) {
        Path b = sample_exit_bridge(w, field, rng);
        ++counts[path_cell(b.v, g, theta_cell)];
    }
    CHECK(chisq_gof_pvalue(counts, probs) > 1e-3);
}

TEST_CASE("exact conditional sampler: audit and loop law") {
    const auto &m = model();
    const GeometryTriple &g = geom();
    Pt w0 = make_pt({3, 0, 0});
    Pt y0 = make_pt({5, 0, 0});
    REQUIRE(g.boundary_a1.contains(w0));
    REQUIRE(g.v.contains(y0));
    Rng rng(21, 6);
    std::vector<double> loops;
    for (int t = 0; t < 4000; ++t) {
        Path p = m.sample_excursion_exact(w0, y0, rng);
        CHECK(p.v.front() == w0);
        CHECK(p.v.back() == y0);
        int nv = 0;
        for (const Pt &x : p.v) {
            CHECK(g.a2_complement.contains(x));
            if (x == y0) ++nv;
        }
        loops.push_back(double(nv - 1));
    }
    // loop count is geometric with mean KG(y0,y0) - 1
    auto ms = mean_se(loops);
    double kgd = m.kg_pair(w0, y0) / m.f_a1(w0, y0);
    CHECK(std::abs(ms.mean - (kgd - 1.0)) < 4 * ms.se);
}

TEST_CASE("rejection sampler agrees with the exact sampler") {
    const auto &m = model();
    const GeometryTriple &g = geom();
    Pt w0 = make_pt({3, 0, 0});
    Pt y0 = make_pt({5, 0, 0});
    Rng rng(21, 7);

    // acceptance probability equals KG(w0,y0) * P_{y0}[no V return]
    double accept = m.kg_pair(w0, y0) * m.no_return_mass(y0);
    int ok = 0;
    const int trials = 3000;
    for (int t = 0; t < trials; ++t) {
        try {
            m.sample_excursion_given_endpoints(w0, y0, rng, 1);
            ++ok;
        } catch (const RareEventError &) {
        }
    }
    double phat = double(ok) / trials;
    CHECK(std::abs(phat - accept) < 4 * std::sqrt(accept * (1 - accept) / trials));

    // occupancy footprint |path cap A1| has the same law under both samplers
    auto a1_count = [&](const Path &p) {
        int c = 0;
        for (const Pt &x : p.v)
            if (g.grid.at(x) == Region::A1) ++c;
        return std::min(c, 14);
    };
    std::vector<long long> ca(15, 0), cb(15, 0);
    for (int t = 0; t < 2500; ++t)
        ++ca[a1_count(m.sample_excursion_exact(w0, y0, rng))];
    int got = 0;
    while (got < 2500) {
        try {
            ++cb[a1_count(m.sample_excursion_given_endpoints(w0, y0, rng, 1000000))];
            ++got;
        } catch (const RareEventError &) {
        }
    }
    CHECK(chisq_two_sample_pvalue(ca, cb) > 1e-3);

    CHECK_THROWS_AS(m.sample_excursion_given_endpoints(w0, y0, rng, 0), RareEventError);
}

TEST_CASE("alpha and ell over endpoint neighborhoods") {
    const auto &m = model();
    Pt w0 = make_pt({3, 0, 0});
    Pt y0 = make_pt({5, 0, 0});
    // radius below one lattice step reduces Gamma to the center
    auto solo = alpha_ell(m, w0, y0, 0.2, 30, 9);
    CHECK(solo.gamma.size() == 1);
    CHECK(solo.alpha == doctest::Approx(1.0));

    auto nb = alpha_ell(m, w0, y0, 0.75, 40, 9);
    CHECK(nb.gamma.size() > 1);
    CHECK(nb.alpha > 0.0);
    CHECK(nb.alpha <= 1.0);
    CHECK(nb.ell > 0.0);
    CHECK(solo.ell > 0.0);

    CHECK_THROWS(alpha_ell(m, w0, y0, -0.1, 10, 9));
    CHECK_THROWS(alpha_ell(m, w0, y0, 1.5, 10, 9));
}

TEST_CASE("soft local time expectation identity on clotheslines") {
    const auto &m = model();
    const GeometryTriple &g = geom();
    auto ctx = make_clothesline_context(g, green3());

    // two probe atoms: the largest-mass pair from an axis source, and Theta
    Pt wprobe = make_pt({5, 0, 0});
    Pt yprobe = g.boundary_a2.points()[0];
    auto probe_dens = m.density(wprobe, yprobe);
    int best_atom = 0;
    for (int a = 0; a < m.space().n_pairs; ++a)
        if (probe_dens[a] > probe_dens[best_atom]) best_atom = a;
    int theta = m.space().theta;

    AtomSpace space{std::vector<double>(m.space().n_pairs + 1, 1.0)};
    const int reps = 1500;
    std::vector<double> f_best, f_theta, n_best, n_theta;
    Rng rng(21, 8);
    for (int rep = 0; rep < reps; ++rep) {
        auto cl = sample_clothesline(ctx, {ClotheslineStart::Equilibrium}, rng);
        PoissonSheet sheet(space, 900000 + rep, 0);
        SltState st(sheet);
        double cb = 0, ct = 0;
        for (const auto &pr : cl.pairs) {
            auto gk = m.density(pr.w, pr.y);
            SltStep step = st.step(gk);
            if (step.chosen == best_atom) cb += 1;
            if (step.chosen == theta) ct += 1;
        }
        f_best.push_back(st.g_accum()[best_atom]);
        f_theta.push_back(st.g_accum()[theta]);
        n_best.push_back(cb);
        n_theta.push_back(ct);
    }
    auto mfb = mean_se(f_best), mnb = mean_se(n_best);
    auto mft = mean_se(f_theta), mnt = mean_se(n_theta);
    CHECK(std::abs(mfb.mean - mnb.mean) < 3 * std::hypot(mfb.se, mnb.se));
    CHECK(std::abs(mft.mean - mnt.mean) < 3 * std::hypot(mft.se, mnt.se));
    CHECK(mft.mean > 0.1); // Theta carries real mass on this geometry
}
