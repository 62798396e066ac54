#include "doctest.h"

#include <cmath>
#include <set>

#include "rilab/slt.hpp"
#include "rilab/stats.hpp"

using namespace rilab;

TEST_CASE("poisson sheet is lazy, ordered and order independent") {
    AtomSpace space{{1.0, 2.0, 0.5}};
    PoissonSheet a(space, 42, 1), b(space, 42, 1);

    // query out of order on one sheet, in order on the other
    double h5 = a.height(1, 5);
    double h0 = a.height(1, 0);
    for (int j = 0; j <= 5; ++j) CHECK(a.height(1, j) == b.height(1, j));
    CHECK(h0 == b.height(1, 0));
    CHECK(h5 == b.height(1, 5));
    for (int j = 0; j < 5; ++j) CHECK(a.height(1, j) < a.height(1, j + 1));

    PoissonSheet c(space, 43, 1);
    CHECK(c.height(0, 0) != a.height(0, 0));
}

TEST_CASE("sheet heights have the right exponential law") {
    // first height above a mass-m atom is Exp(m)
    AtomSpace space{std::vector<double>(4000, 2.0)};
    PoissonSheet sheet(space, 17, 3);
    std::vector<double> first, gaps;
    for (int a = 0; a < space.size(); ++a) {
        first.push_back(sheet.height(a, 0));
        gaps.push_back(sheet.height(a, 1) - sheet.height(a, 0));
    }
    CHECK(ks_exponential_pvalue(first, 2.0) > 1e-3);
    CHECK(ks_exponential_pvalue(gaps, 2.0) > 1e-3);
}

TEST_CASE("one step picks atoms with the prescribed density") {
    std::vector<double> g = {0.5, 0.3, 0.2};
    AtomSpace space{{1.0, 1.0, 1.0}};
    std::vector<long long> counts(3, 0);
    std::vector<double> xis;
    const int n = 20000;
    for (int rep = 0; rep < n; ++rep) {
        PoissonSheet sheet(space, 1000 + rep, 0);
        SltState st(sheet);
        SltStep s = st.step(g);
        ++counts[s.chosen];
        xis.push_back(s.xi);
    }
    CHECK(chisq_gof_pvalue(counts, g) > 1e-3);
    // the minimizing mark of a unit-total intensity is a standard exponential
    CHECK(ks_exponential_pvalue(xis, 1.0) > 1e-3);
}

TEST_CASE("accumulated curve is the xi-weighted sum of densities") {
    AtomSpace space{{1.0, 1.0, 1.0, 1.0}};
    PoissonSheet sheet(space, 5, 5);
    SltState st(sheet);
    std::vector<std::vector<double>> gs = {{0.25, 0.25, 0.25, 0.25},
                                           {0.7, 0.1, 0.1, 0.1},
                                           {0.0, 0.5, 0.5, 0.0}};
    for (const auto &g : gs) st.step(g);
    std::vector<double> manual(4, 0.0);
    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 4; ++a) manual[a] += st.history()[k].xi * gs[k][a];
    for (int a = 0; a < 4; ++a) CHECK(st.g_accum()[a] == doctest::Approx(manual[a]).epsilon(1e-12));
    CHECK(st.used().size() == 3);
    CHECK(st.tie_count() == 0);
}

TEST_CASE("density validation") {
    AtomSpace space{{1.0, 1.0}};
    PoissonSheet sheet(space, 1, 1);
    SltState st(sheet);
    CHECK_THROWS(st.step({0.5, 0.4}));        // does not sum to 1
    CHECK_THROWS(st.step({1.5, -0.5}));       // negative entry
    CHECK_THROWS(st.step({0.5, 0.5, 0.0}));   // wrong size
    AtomSpace zero{{1.0, 1.0}};
    (void)zero;
}

TEST_CASE("consumed points never repeat and lie on the curve") {
    AtomSpace space{std::vector<double>(10, 1.0)};
    PoissonSheet sheet(space, 77, 2);
    std::vector<double> g(10, 0.1);
    SltState st(sheet);
    for (int k = 0; k < 40; ++k) st.step(g);
    std::set<std::pair<int, int>> seen;
    for (auto pr : st.used()) CHECK(seen.insert(pr).second);
    // each consumed point sits at or below the final curve
    for (auto [a, j] : st.used()) CHECK(sheet.height(a, j) <= st.g_accum()[a] + 1e-12);
    // the next unconsumed point of every atom lies strictly above it was when chosen
    for (auto [a, j] : st.used()) CHECK(j >= 0);
}

TEST_CASE("prefix run is dominated, longer run is not") {
    AtomSpace space{std::vector<double>(6, 1.0)};
    PoissonSheet sheet(space, 9, 9);
    std::vector<double> g = {0.3, 0.2, 0.2, 0.1, 0.1, 0.1};
    SltState low(sheet), high(sheet);
    for (int k = 0; k < 3; ++k) low.step(g);
    for (int k = 0; k < 8; ++k) high.step(g);
    auto res = dominance_certificate(low, high);
    CHECK(res.dominated);
    auto res2 = dominance_certificate(high, low);
    CHECK_FALSE(res2.dominated);
    CHECK(res2.witness_atom >= 0);

    PoissonSheet other(space, 10, 9);
    SltState foreign(other);
    CHECK_THROWS(dominance_certificate(low, foreign));
}

TEST_CASE("run_slt with a stop rule") {
    AtomSpace space{std::vector<double>(3, 1.0)};
    PoissonSheet sheet(space, 4, 4);
    std::vector<double> g = {0.5, 0.25, 0.25};
    auto st = run_slt(
        sheet, [&](const SltState &) { return g; },
        [](const SltState &s) { return s.history().size() >= 7; });
    CHECK(st.history().size() == 7);
}

TEST_CASE("path attachment memoizes per point") {
    int calls = 0;
    PathAttachment att(
        [&](int atom, Rng &rng) {
            ++calls;
            Path p;
            p.v.push_back(make_pt({atom, int(rng.below(100)), 0}));
            return p;
        },
        123);
    const Path &p1 = att.get(2, 0);
    const Path &p2 = att.get(2, 0);
    CHECK(&p1 == &p2);
    CHECK(calls == 1);
    att.get(2, 1);
    att.get(3, 0);
    CHECK(calls == 3);

    // a fresh attachment with the same seed reproduces the same paths
    PathAttachment att2(
        [&](int atom, Rng &rng) {
            Path p;
            p.v.push_back(make_pt({atom, int(rng.below(100)), 0}));
            return p;
        },
        123);
    CHECK(att2.get(2, 0).v[0] == p1.v[0]);
}
