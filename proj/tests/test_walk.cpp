#include "doctest.h"

#include <cmath>

#include "rilab/geometry.hpp"
#include "rilab/green.hpp"
#include "rilab/potential.hpp"
#include "rilab/walk.hpp"

using namespace rilab;

TEST_CASE("run_until stops exactly at the stopping set") {
    Rng rng(5, 6);
    auto stop = [](const Pt &p) { return linf(p, 3) >= 3; };
    for (int t = 0; t < 50; ++t) {
        Path p = run_until(make_pt({0, 0, 0}), 3, stop, 1'000'000, rng);
        CHECK(linf(p.v.back(), 3) == 3);
        for (size_t i = 0; i + 1 < p.v.size(); ++i) {
            CHECK(linf(p.v[i], 3) < 3);
            CHECK(norm2(sub(p.v[i + 1], p.v[i], 3), 3) == 1);
        }
    }
}

TEST_CASE("run_until throws on step cap with the partial path attached") {
    Rng rng(5, 7);
    auto never = [](const Pt &) { return false; };
    CHECK_THROWS_AS(run_until(make_pt({0, 0, 0}), 3, never, 50, rng), WalkTimeout);
    try {
        run_until(make_pt({0, 0, 0}), 3, never, 50, rng);
    } catch (const WalkTimeout &e) {
        CHECK(e.partial_path.v.size() == 51);
    }
}

namespace {

// straight axis path segments between x-levels, for hand-built excursions
void axis_run(std::vector<Pt> &out, int from, int to) {
    int step = to > from ? 1 : -1;
    for (int x = from + step;; x += step) {
        out.push_back(make_pt({x, 0, 0}));
        if (x == to) break;
    }
}

} // namespace

TEST_CASE("excursion decomposition on a hand-built path") {
    GeometryTriple g = build_geometry(Shape::Ball, 4, 2, 3);

    // label profile along the positive x axis
    int first_a1 = -1, last_v = -1, first_a2 = -1, a_v = -1;
    for (int x = 0; x < 30; ++x) {
        Region rr = g.grid.at(make_pt({x, 0, 0}));
        if (rr == Region::A1 && first_a1 < 0) first_a1 = x;
        if (rr == Region::V) {
            last_v = x;
            if (a_v < 0) a_v = x;
        }
        if (!g.grid.in_a2c(make_pt({x, 0, 0})) && first_a2 < 0 && x > 0) first_a2 = x;
    }
    REQUIRE(first_a1 == 0);
    REQUIRE(a_v > 0);
    REQUIRE(a_v == last_v);
    REQUIRE(first_a2 > last_v);

    // V -> A1 -> out to A2, back to V, out again; ends on the second A2 entry
    std::vector<Pt> v = {make_pt({a_v, 0, 0})};
    axis_run(v, a_v, 0);
    axis_run(v, 0, first_a2);
    int r1 = static_cast<int>(v.size()) - 1;
    axis_run(v, first_a2, a_v);
    int d1 = r1 + (first_a2 - last_v); // first V vertex after R_1
    axis_run(v, a_v, first_a2);
    int r2 = static_cast<int>(v.size()) - 1;

    ExcursionRecord rec = excursion_decompose(Path{v}, g);
    REQUIRE(rec.d_times.size() == 2);
    REQUIRE(rec.r_times.size() == 2);
    CHECK(rec.d_times[0] == 0);
    CHECK(rec.r_times[0] == r1);
    CHECK(rec.d_times[1] == d1);
    CHECK(rec.r_times[1] == r2);

    REQUIRE(rec.endpoint_pairs.size() == 2);
    CHECK_FALSE(rec.endpoint_pairs[0].theta);
    CHECK(rec.endpoint_pairs[0].w0 == make_pt({3, 0, 0})); // first A1 vertex on the way in
    CHECK(rec.endpoint_pairs[0].y0 == make_pt({last_v, 0, 0}));
    CHECK(rec.endpoint_pairs[1].theta); // second excursion never reaches A1

    // trailing incomplete excursion is dropped
    std::vector<Pt> w = v;
    axis_run(w, first_a2, a_v);
    ExcursionRecord rec2 = excursion_decompose(Path{w}, g);
    CHECK(rec2.endpoint_pairs.size() == 2);
    CHECK(rec2.d_times.size() == 3);

    CHECK_THROWS_AS(excursion_decompose(Path{{make_pt({0, 0, 0})}}, g), std::domain_error);
}

TEST_CASE("exit bridge targets the right vertex and stays inside") {
    GeometryTriple g = build_geometry(Shape::Ball, 4, 2, 3);
    LatticeDomain dom(g.a2_complement.points(), 3);
    LatticeFactor factor(dom);
    Pt target = g.boundary_a2.points()[0];
    BridgeField field = make_exit_field(dom, factor, target);

    // the field is the exact exit-location probability
    Pt w = g.v.points()[2];
    auto p = dirichlet_hitting(dom, {FiniteSet({target}, 3)}, w);
    CHECK(field.value(w) == doctest::Approx(p[0]).epsilon(1e-8));

    Rng rng(9, 1);
    for (int t = 0; t < 200; ++t) {
        Path b = sample_exit_bridge(w, field, rng);
        CHECK(b.v.front() == w);
        CHECK(b.v.back() == target);
        for (size_t i = 0; i + 1 < b.v.size(); ++i) {
            CHECK(g.a2_complement.contains(b.v[i]));
            CHECK(norm2(sub(b.v[i + 1], b.v[i], 3), 3) == 1);
        }
    }
}

TEST_CASE("far-field return decision matches the exact probability") {
    GreenTable green(3);
    auto eq = equilibrium_measure(FiniteSet({make_pt({0, 0, 0})}, 3), green);
    Pt x = make_pt({25, 0, 0});
    double p = return_probability(x, eq, green);
    Rng rng(2, 8);
    int returns = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        auto back = decide_return_to(x, eq, green, rng);
        if (back) {
            CHECK(*back == make_pt({0, 0, 0}));
            ++returns;
        }
    }
    double phat = double(returns) / n;
    CHECK(std::abs(phat - p) < 4 * std::sqrt(p * (1 - p) / n));
}
