#include "doctest.h"

#include <cmath>

#include "rilab/green.hpp"
#include "rilab/linsys.hpp"
#include "rilab/point.hpp"
#include "rilab/potential.hpp"
#include "rilab/stats.hpp"

using namespace rilab;

namespace {

std::vector<Pt> ball_pts(int r2max, int d) {
    std::vector<Pt> out;
    int r = static_cast<int>(std::sqrt(double(r2max))) + 1;
    std::vector<int> c(d, -r);
    while (true) {
        Pt p{};
        for (int i = 0; i < d; ++i) p.c[i] = c[i];
        if (norm2(p, d) <= r2max) out.push_back(p);
        int i = 0;
        while (i < d && ++c[i] > r) c[i++] = -r;
        if (i == d) break;
    }
    return out;
}

} // namespace

TEST_CASE("green function values and identities, d=3") {
    GreenTable g(3);
    // Watson's integral gives the walk's return constant
    CHECK(g(make_pt({0, 0, 0})) == doctest::Approx(1.5163860592).epsilon(1e-9));
    double ge = g(make_pt({1, 0, 0}));
    CHECK(g(make_pt({-1, 0, 0})) == doctest::Approx(ge).epsilon(1e-12));
    CHECK(g(make_pt({0, 0, 1})) == doctest::Approx(ge).epsilon(1e-12));
    // G(0) = 1 + mean over neighbors, harmonic away from 0
    CHECK(g(make_pt({0, 0, 0})) - 1.0 == doctest::Approx(ge).epsilon(1e-9));
    Pt x = make_pt({2, 1, 0});
    double avg = 0;
    for_neighbors(x, 3, [&](const Pt &n) { avg += g(n); });
    CHECK(g(x) == doctest::Approx(avg / 6.0).epsilon(1e-9));
    // far field approaches (3 / 2 pi) / |x|
    Pt far = make_pt({25, 0, 0});
    CHECK(g(far) / g.asymptotic(far) == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("green far-field expansion agrees with quadrature at the switch") {
    GreenTable g(3);
    const double c3 = 3.0 / (2.0 * M_PI);
    // these offsets sit just below the far-field threshold, so they still go
    // through quadrature; the closed form must already match there
    for (Pt x : {make_pt({49, 0, 0}), make_pt({35, 35, 0}), make_pt({28, 28, 28})}) {
        double r2 = double(norm2(x, 3));
        double s4 = 0;
        for (int i = 0; i < 3; ++i) s4 += std::pow(double(x.c[i]), 4);
        double model = c3 / std::sqrt(r2) * (1.0 + (5.0 * s4 / (r2 * r2) - 3.0) / (8.0 * r2));
        CHECK(g(x) == doctest::Approx(model).epsilon(1e-6));
        CHECK(std::abs(g(x) - model) < 2e-8);
    }
}

TEST_CASE("green function d=4 and d=5") {
    GreenTable g4(4);
    CHECK(g4(make_pt({0, 0, 0, 0})) == doctest::Approx(1.23946712).epsilon(1e-7));
    GreenTable g5(5);
    Pt x = make_pt({1, 1, 0, 0, 0});
    double avg = 0;
    for_neighbors(x, 5, [&](const Pt &n) { avg += g5(n); });
    CHECK(g5(x) == doctest::Approx(avg / 10.0).epsilon(1e-8));
}

TEST_CASE("monte carlo green agrees with quadrature") {
    std::vector<Pt> offs = {make_pt({0, 0, 0}), make_pt({1, 0, 0}), make_pt({2, 2, 1})};
    auto mc = mc_green(offs, 3, 40000, 24, 11);
    GreenTable g(3);
    for (size_t i = 0; i < offs.size(); ++i) {
        CHECK(mc.std_error[i] < 0.02);
        CHECK(std::abs(mc.value[i] - g(offs[i])) < 4 * mc.std_error[i] + 0.01);
    }
}

TEST_CASE("dirichlet hitting probabilities on tiny domains") {
    // single transient vertex: each neighbor is reached with probability 1/6
    LatticeDomain dom({make_pt({0, 0, 0})}, 3);
    FiniteSet c1({make_pt({1, 0, 0})}, 3);
    FiniteSet c2({make_pt({-1, 0, 0})}, 3);
    FiniteSet c3({make_pt({0, 1, 0}), make_pt({0, -1, 0}), make_pt({0, 0, 1}),
                  make_pt({0, 0, -1})},
                 3);
    auto p = dirichlet_hitting(dom, {c1, c2, c3}, make_pt({0, 0, 0}));
    CHECK(p[0] == doctest::Approx(1.0 / 6).epsilon(1e-10));
    CHECK(p[1] == doctest::Approx(1.0 / 6).epsilon(1e-10));
    CHECK(p[2] == doctest::Approx(4.0 / 6).epsilon(1e-10));

    // two transient vertices 0 and e1; from 0 the far class is hit w.p. 1/7
    LatticeDomain dom2({make_pt({0, 0, 0}), make_pt({1, 0, 0})}, 3);
    std::vector<Pt> far;
    for_neighbors(make_pt({1, 0, 0}), 3, [&](const Pt &n) {
        if (!(n == make_pt({0, 0, 0}))) far.push_back(n);
    });
    auto p2 = dirichlet_hitting(dom2, {FiniteSet(far, 3)}, make_pt({0, 0, 0}));
    CHECK(p2[0] == doctest::Approx(1.0 / 7).epsilon(1e-10));
    auto p3 = dirichlet_hitting(dom2, {FiniteSet(far, 3)}, make_pt({1, 0, 0}));
    CHECK(p3[0] == doctest::Approx(6.0 / 7).epsilon(1e-10));

    // start inside an absorbing class
    auto p4 = dirichlet_hitting(dom2, {FiniteSet(far, 3)}, far[0]);
    CHECK(p4[0] == doctest::Approx(1.0));
}

TEST_CASE("killed green matrix on tiny domains") {
    LatticeDomain dom({make_pt({0, 0, 0})}, 3);
    auto kg = killed_green(dom);
    CHECK(kg(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    LatticeDomain dom2({make_pt({0, 0, 0}), make_pt({1, 0, 0})}, 3);
    auto kg2 = killed_green(dom2);
    CHECK(kg2(0, 0) == doctest::Approx(36.0 / 35).epsilon(1e-10));
    CHECK(kg2(0, 1) == doctest::Approx(6.0 / 35).epsilon(1e-10));
    CHECK(kg2(1, 0) == doctest::Approx(kg2(0, 1)).epsilon(1e-12));

    LatticeFactor f(dom2);
    auto col = killed_green_column(f, dom2, make_pt({1, 0, 0}));
    CHECK(col[0] == doctest::Approx(kg2(0, 1)).epsilon(1e-10));
    CHECK(col[1] == doctest::Approx(kg2(1, 1)).epsilon(1e-10));
}

TEST_CASE("killed green dominated by free green") {
    GreenTable g(3);
    LatticeDomain dom(ball_pts(9, 3), 3);
    auto kg = killed_green(dom);
    for (int i = 0; i < dom.size(); ++i)
        for (int j = 0; j < dom.size(); ++j) {
            CHECK(kg(i, j) <= g.at(dom.point(i), dom.point(j)) + 1e-9);
            CHECK(kg(i, j) >= -1e-12);
        }
}

TEST_CASE("capacity closed forms") {
    GreenTable g(3);
    auto c0 = capacity_last_exit(FiniteSet({make_pt({0, 0, 0})}, 3), g);
    CHECK(c0.value == doctest::Approx(1.0 / g(make_pt({0, 0, 0}))).epsilon(1e-10));

    Pt z = make_pt({3, 0, 0});
    auto c2 = capacity_last_exit(FiniteSet({make_pt({0, 0, 0}), z}, 3), g);
    double expect = 2.0 / (g(make_pt({0, 0, 0})) + g(z));
    CHECK(c2.value == doctest::Approx(expect).epsilon(1e-10));

    CHECK(capacity_last_exit(FiniteSet({}, 3), g).value == 0.0);
}

TEST_CASE("capacity monotone and subadditive on small sets") {
    GreenTable g(3);
    Rng rng(7, 99);
    for (int t = 0; t < 25; ++t) {
        std::vector<Pt> pa, pb;
        int na = 1 + rng.below(5), nb = 1 + rng.below(5);
        for (int i = 0; i < na; ++i)
            pa.push_back(make_pt({int(rng.below(7)) - 3, int(rng.below(7)) - 3, int(rng.below(7)) - 3}));
        for (int i = 0; i < nb; ++i)
            pb.push_back(make_pt({int(rng.below(7)) - 3, int(rng.below(7)) - 3, int(rng.below(7)) - 3}));
        std::vector<Pt> pu = pa;
        pu.insert(pu.end(), pb.begin(), pb.end());
        double ca = capacity_last_exit(FiniteSet(pa, 3), g).value;
        double cb = capacity_last_exit(FiniteSet(pb, 3), g).value;
        double cu = capacity_last_exit(FiniteSet(pu, 3), g).value;
        CHECK(cu >= ca - 1e-9);
        CHECK(cu <= ca + cb + 1e-9);
    }
}

TEST_CASE("equilibrium measure symmetry on a cube") {
    GreenTable g(3);
    std::vector<Pt> cube;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z) cube.push_back(make_pt({x, y, z}));
    auto eq = equilibrium_measure(FiniteSet(cube, 3), g);
    int center = eq.support.index_of(make_pt({1, 1, 1}));
    int corner = eq.support.index_of(make_pt({0, 0, 0}));
    int face = eq.support.index_of(make_pt({1, 1, 0}));
    // interior carries no charge; corners carry the most
    CHECK(std::abs(eq.weights[center]) < 1e-9);
    CHECK(eq.weights[corner] > eq.weights[face]);
    // all eight corners match by symmetry
    CHECK(eq.weights[eq.support.index_of(make_pt({2, 2, 2}))] ==
          doctest::Approx(eq.weights[corner]).epsilon(1e-9));
    double sum = 0;
    for (double w : eq.weights) sum += w;
    CHECK(sum == doctest::Approx(eq.total).epsilon(1e-12));
}

TEST_CASE("equilibrium sampling matches the weights") {
    GreenTable g(3);
    FiniteSet a({make_pt({0, 0, 0}), make_pt({2, 0, 0}), make_pt({0, 2, 0})}, 3);
    auto eq = equilibrium_measure(a, g);
    Rng rng(3, 4);
    std::vector<long long> counts(eq.support.size(), 0);
    const int n = 30000;
    for (int i = 0; i < n; ++i) ++counts[eq.support.index_of(eq.sample(rng))];
    std::vector<double> probs;
    for (double w : eq.weights) probs.push_back(w / eq.total);
    CHECK(chisq_gof_pvalue(counts, probs) > 1e-4);
}

TEST_CASE("escape monte carlo agrees with last exit") {
    GreenTable g(3);
    FiniteSet a({make_pt({0, 0, 0}), make_pt({1, 0, 0})}, 3);
    auto exact = capacity_last_exit(a, g);
    auto mc = capacity_mc_escape(a, g, 4000, 16, 21);
    CHECK(std::abs(mc.value - exact.value) < mc.error_bound + 1e-6);
}

TEST_CASE("return probability from far away") {
    GreenTable g(3);
    auto eq = equilibrium_measure(FiniteSet({make_pt({0, 0, 0})}, 3), g);
    Pt x = make_pt({30, 0, 0});
    CHECK(return_probability(x, eq, g) ==
          doctest::Approx(g(x) / g(make_pt({0, 0, 0}))).epsilon(1e-10));
}
