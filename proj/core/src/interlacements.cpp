#include "rilab/interlacements.hpp"

#include <algorithm>
#include <cmath>

namespace rilab {

namespace {

long long hull_radius2(const FiniteSet &window, int factor) {
    long long m = 0;
    for (const Pt &p : window.points()) m = std::max(m, norm2(p, window.dim()));
    long long r = static_cast<long long>(std::ceil(std::sqrt(double(m)))) + 2;
    long long rb = std::max<long long>(factor * r, 20);
    return rb * rb;
}

// walk one trajectory from `start`, flagging window hits; path recording is
// optional so the vacant-law loop stays cheap
template <typename Visit>
void run_trajectory(const Pt &start, const FiniteSet &window, const EquilibriumMeasure &eq,
                    const GreenTable &green, Rng &rng, long long r2cap, long long step_cap,
                    Visit &&visit) {
    const int d = window.dim();
    Pt x = start;
    visit(x);
    long long r2 = norm2(x, d), steps = 0;
    while (true) {
        while (r2 < r2cap) {
            if (++steps > step_cap) throw WalkTimeout(Path{});
            uint32_t mv = rng.below(static_cast<uint32_t>(2 * d));
            int axis = static_cast<int>(mv >> 1);
            int dir = (mv & 1) ? 1 : -1;
            r2 += 2ll * dir * x.c[axis] + 1;
            x.c[axis] += dir;
            visit(x);
        }
        auto back = decide_return_to(x, eq, green, rng);
        if (!back) return; // escaped for good
        x = *back;          // re-entry law approximated by the equilibrium measure
        r2 = norm2(x, d);
        visit(x);
    }
}

} // namespace

TrajectorySoup sample_soup(const FiniteSet &window, double u_max, const GreenTable &green,
                           const EquilibriumMeasure &eq, Rng &rng, const SoupParams &params) {
    TrajectorySoup soup;
    soup.window = window;
    soup.u_max = u_max;
    if (u_max <= 0 || window.size() == 0) return soup;

    long long r2cap = hull_radius2(window, params.r_big_factor);
    int n = rng.poisson(u_max * eq.total);
    std::vector<double> levels(n);
    for (int i = 0; i < n; ++i) levels[i] = rng.u01() * u_max;
    std::sort(levels.begin(), levels.end());

    for (double lv : levels) {
        TrajectorySoup::Arrival arr;
        arr.level = lv;
        Pt start = eq.sample(rng);
        run_trajectory(start, window, eq, green, rng, r2cap, params.step_cap,
                       [&](const Pt &p) { arr.trajectory.v.push_back(p); });
        soup.arrivals.push_back(std::move(arr));
    }
    return soup;
}

OccupancyField restrict_soup(const TrajectorySoup &soup, double u) {
    if (u > soup.u_max) throw std::out_of_range("restrict: u above u_max");
    OccupancyField f;
    for (const auto &arr : soup.arrivals) {
        if (arr.level > u) continue;
        for (const Pt &p : arr.trajectory.v)
            if (soup.window.contains(p)) f.occupied.insert(p);
    }
    return f;
}

VacantEstimate vacant_probability(const FiniteSet &window, const FiniteSet &a, double u,
                                  long long reps, const GreenTable &green, uint64_t seed,
                                  const SoupParams &params) {
    EquilibriumMeasure eq = equilibrium_measure(window, green);
    long long r2cap = hull_radius2(window, params.r_big_factor);
    long long vacant = 0;
    for (long long rep = 0; rep < reps; ++rep) {
        Rng rng(seed, 0x76616300ull + rep);
        int n = rng.poisson(u * eq.total);
        bool hit = false;
        for (int i = 0; i < n && !hit; ++i) {
            Pt start = eq.sample(rng);
            run_trajectory(start, window, eq, green, rng, r2cap, params.step_cap,
                           [&](const Pt &p) {
                               if (!hit && a.contains(p)) hit = true;
                           });
        }
        if (!hit) ++vacant;
    }
    double p = double(vacant) / reps;
    return {p, std::sqrt(std::max(p * (1 - p), 1.0 / reps) / reps)};
}

std::vector<std::vector<uint8_t>> sample_occupancy_levels(const FiniteSet &window,
                                                          const std::vector<double> &levels,
                                                          const GreenTable &green,
                                                          const EquilibriumMeasure &eq, Rng &rng,
                                                          const SoupParams &params) {
    double u_max = *std::max_element(levels.begin(), levels.end());
    long long r2cap = hull_radius2(window, params.r_big_factor);

    int n = rng.poisson(u_max * eq.total);
    std::vector<double> arr_levels(n);
    for (int i = 0; i < n; ++i) arr_levels[i] = rng.u01() * u_max;

    std::vector<std::vector<uint8_t>> occ(levels.size(),
                                          std::vector<uint8_t>(window.size(), 0));
    for (int i = 0; i < n; ++i) {
        std::vector<int> hits;
        Pt start = eq.sample(rng);
        run_trajectory(start, window, eq, green, rng, r2cap, params.step_cap,
                       [&](const Pt &p) {
                           if (window.contains(p)) hits.push_back(window.index_of(p));
                       });
        for (size_t l = 0; l < levels.size(); ++l)
            if (arr_levels[i] <= levels[l])
                for (int h : hits) occ[l][h] = 1;
    }
    return occ;
}

} // namespace rilab
