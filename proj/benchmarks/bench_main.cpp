#include <benchmark/benchmark.h>

#include "rilab/clothesline.hpp"
#include "rilab/densities.hpp"
#include "rilab/factored_slt.hpp"
#include "rilab/green.hpp"
#include "rilab/potential.hpp"

using namespace rilab;

namespace {

// shared fixtures; construction cost must stay out of the timed loops
const GeometryTriple &geom() {
    static GeometryTriple g = build_geometry(Shape::Ball, 6, 2, 3);
    return g;
}

const GreenTable &green() {
    static GreenTable t(3);
    return t;
}

const DensityModel &model() {
    static DensityModel m(geom());
    return m;
}

const FactorTables &tables() {
    static FactorTables t = make_factor_tables(model());
    return t;
}

const ClotheslineContext &cloth_ctx() {
    static ClotheslineContext c = make_clothesline_context(geom(), green());
    return c;
}

void bench_green_eval(benchmark::State &state) {
    // uncached offsets dominated by the quadrature; cycle a small orbit
    int k = 0;
    for (auto _ : state) {
        GreenTable fresh(3);
        benchmark::DoNotOptimize(fresh(make_pt({5 + (k % 7), 3, 1})));
        ++k;
    }
}
BENCHMARK(bench_green_eval);

void bench_green_cached(benchmark::State &state) {
    const GreenTable &t = green();
    benchmark::DoNotOptimize(t(make_pt({5, 3, 1})));
    for (auto _ : state) benchmark::DoNotOptimize(t(make_pt({5, 3, 1})));
}
BENCHMARK(bench_green_cached);

void bench_equilibrium_measure(benchmark::State &state) {
    benchmark::DoNotOptimize(equilibrium_measure(geom().a1, green()).total); // warm caches
    for (auto _ : state) {
        EquilibriumMeasure eq = equilibrium_measure(geom().a1, green());
        benchmark::DoNotOptimize(eq.total);
    }
}
BENCHMARK(bench_equilibrium_measure);

void bench_density_row(benchmark::State &state) {
    const DensityModel &m = model();
    const Pt w = geom().v.points()[0];
    const Pt y = geom().boundary_a2.points()[0];
    for (auto _ : state) {
        std::vector<double> d = m.density(w, y);
        benchmark::DoNotOptimize(d.data());
    }
}
BENCHMARK(bench_density_row);

void bench_clothesline_sample(benchmark::State &state) {
    Rng rng(1, 0);
    ClotheslineStart start{ClotheslineStart::Equilibrium, {}};
    benchmark::DoNotOptimize(sample_clothesline(cloth_ctx(), start, rng).pairs.size());
    for (auto _ : state) {
        ClotheslineRealization c = sample_clothesline(cloth_ctx(), start, rng);
        benchmark::DoNotOptimize(c.pairs.size());
    }
}
BENCHMARK(bench_clothesline_sample);

void bench_factored_step(benchmark::State &state) {
    // one full-scan soft-local-times step over the whole pair space
    FactoredSheet sheet(tables().n_atoms, 1, 0);
    FactoredProcess proc(tables(), sheet);
    int iw = 0, iy = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(proc.step(iw, iy).chosen);
        iw = (iw + 1) % geom().v.size();
        iy = (iy + 3) % geom().boundary_a2.size();
    }
}
BENCHMARK(bench_factored_step);

void bench_exact_excursion(benchmark::State &state) {
    const DensityModel &m = model();
    const Pt w0 = geom().boundary_a1.points()[0];
    const Pt y0 = geom().v.points()[0];
    Rng rng(1, 1);
    benchmark::DoNotOptimize(m.sample_excursion_exact(w0, y0, rng).v.size());
    for (auto _ : state) {
        Path p = m.sample_excursion_exact(w0, y0, rng);
        benchmark::DoNotOptimize(p.v.size());
    }
}
BENCHMARK(bench_exact_excursion);

} // namespace

BENCHMARK_MAIN();
