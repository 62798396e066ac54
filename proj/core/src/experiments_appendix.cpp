#include "rilab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rilab/clothesline.hpp"
#include "rilab/densities.hpp"
#include "rilab/linsys.hpp"
#include "rilab/potential.hpp"
#include "rilab/rng.hpp"
#include "rilab/stats.hpp"
#include "exp_util.hpp"

namespace rilab {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// (x^-a - bn^-a) / (ad^-a - bd^-a), the radial escape profile with exponent a
double radial_profile(double x, double bn, double ad, double bd, double a) {
    return (std::pow(x, -a) - std::pow(bn, -a)) / (std::pow(ad, -a) - std::pow(bd, -a));
}

int argmax_x(const FiniteSet &set) {
    int best = 0;
    for (int i = 1; i < set.size(); ++i)
        if (set.points()[i].c[0] > set.points()[best].c[0]) best = i;
    return best;
}

} // namespace

ExperimentReport run_appendix_scalings(const RunConfig &cfg) {
    Timer timer;
    ExperimentReport rep;
    rep.name = "appendix-scalings";
    rep.config_echo = cfg.echo();
    const int d = cfg.dim;

    // point-visit and entrance-law decay on a thin shell, one killed-Green
    // column each; per-point discrete harmonic measure is lattice-rough, so
    // every statistic is averaged over a distance band of targets
    {
        GeometryTriple g = build_geometry(Shape::Ball, 20, 2, d);
        LatticeDomain dom(g.a2_complement.points(), d);
        LatticeFactor fac(dom);

        // chance of visiting a fixed frontier point before leaving the domain,
        // started from surface points at distance h
        const Pt w0 = g.boundary_a1.points()[argmax_x(g.boundary_a1)];
        Eigen::VectorXd col = killed_green_column(fac, dom, w0);
        const double diag = col[dom.verts().index_of(w0)];
        std::vector<double> lh, lf;
        for (double h : {12.0, 15.0, 18.0, 21.0, 24.0}) {
            double sum = 0;
            int cnt = 0;
            for (int i = 0; i < g.v.size(); ++i) {
                double dist = euclid(sub(g.v.points()[i], w0, d), d);
                if (std::abs(dist - h) > 0.75) continue;
                sum += col[dom.verts().index_of(g.v.points()[i])] / diag;
                ++cnt;
            }
            double f = sum / cnt;
            rep.row("hit_point_h" + fmt(h), -1, cfg.seed, f, 0);
            lh.push_back(std::log(h));
            lf.push_back(std::log(f));
        }
        LinReg reg = linear_regression(lh, lf);
        rep.row("hit_point_slope", -1, cfg.seed, reg.slope);
        rep.summary["hit_point_slope"] = reg.slope;
        rep.flag("hit_point_slope_pm04", std::abs(reg.slope + d) <= 0.4);

        // entrance law of the outer boundary from a surface point, band means
        // at lateral distance h
        const Pt w = g.v.points()[argmax_x(g.v)];
        Eigen::VectorXd col2 = killed_green_column(fac, dom, w);
        std::vector<double> qh, qv;
        for (double h : {6.5, 9.5, 12.5, 15.5, 18.5, 21.5}) {
            double sum = 0;
            int cnt = 0;
            for (int i = 0; i < g.boundary_a2.size(); ++i) {
                const Pt &y = g.boundary_a2.points()[i];
                double dist = euclid(sub(y, w, d), d);
                if (std::abs(dist - h) > 0.75) continue;
                double q = 0;
                for_neighbors(y, d, [&](const Pt &z) {
                    if (dom.verts().contains(z)) q += col2[dom.verts().index_of(z)];
                });
                sum += q / (2.0 * d);
                ++cnt;
            }
            double q = sum / cnt;
            rep.row("entrance_law_h" + fmt(h), -1, cfg.seed, q, 0);
            qh.push_back(std::log(h));
            qv.push_back(std::log(q));
        }
        LinReg reg2 = linear_regression(qh, qv);
        rep.row("entrance_law_slope", -1, cfg.seed, reg2.slope);
        rep.summary["entrance_law_slope"] = reg2.slope;
        rep.flag("entrance_law_slope_pm04", std::abs(reg2.slope + d) <= 0.4);
    }

    // annulus escape bracket: exact inner-before-outer probabilities against
    // the two closed radial profiles, taken as an unordered bracket.  Sample
    // radii stop well short of the outer sphere, where the profiles' integer
    // cutoff undershoots the true absorption radius by a lattice unit.
    {
        long long viol = 0, checked = 0;
        for (auto [rho1, rho2] : std::vector<std::pair<double, double>>{{10, 26}, {13, 30}}) {
            std::vector<Pt> pts;
            int rr = static_cast<int>(rho2);
            std::vector<int> c(d, -rr);
            while (true) {
                Pt p{};
                for (int i = 0; i < d; ++i) p.c[i] = c[i];
                double n = euclid(p, d);
                if (n > rho1 && n < rho2) pts.push_back(p);
                int i = 0;
                while (i < d && ++c[i] > rr) c[i++] = -rr;
                if (i == d) break;
            }
            LatticeDomain dom(pts, d);
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dom.size());
            for (int v = 0; v < dom.size(); ++v) {
                int inner = 0;
                for_neighbors(dom.point(v), d, [&](const Pt &nb) {
                    if (euclid(nb, d) <= rho1) ++inner;
                });
                rhs[v] = inner / (2.0 * d);
            }
            Eigen::VectorXd u = solve_dirichlet(dom, rhs, cfg.solver_tol);
            std::vector<std::array<double, 3>> dirs{
                {1, 0, 0}, {0.7071, 0.7071, 0}, {0.5774, 0.5774, 0.5774}};
            for (double t = rho1 + 2; t <= rho2 - 5 + 1e-9; t += (rho2 - rho1 - 7) / 4.0) {
                for (const auto &dir : dirs) {
                    Pt p{};
                    for (int i = 0; i < std::min(d, 3); ++i)
                        p.c[i] = static_cast<int>(std::lround(t * dir[i]));
                    if (!dom.verts().contains(p)) continue;
                    double x = euclid(p, d);
                    double exact = u[dom.verts().index_of(p)];
                    double e1 = radial_profile(x, rho2 - 1, rho1 + 1, rho2, d - 2.5);
                    double e2 = radial_profile(x, rho2, rho1 - 1, rho2, d - 1.0);
                    double lo = std::min(e1, e2), hi = std::max(e1, e2);
                    ++checked;
                    if (!(lo - 1e-12 <= exact && exact <= hi + 1e-12)) ++viol;
                }
            }
        }
        rep.row("annulus_points_checked", -1, cfg.seed, double(checked));
        rep.row("annulus_bracket_violations", -1, cfg.seed, double(viol));
        rep.summary["annulus_bracket_violations"] = double(viol);
        rep.flag("annulus_bracket_zero_violations", viol == 0);
    }

    // peak endpoint density on the self-similar family r = 3s.  The landscape
    // over source pairs has many near-optimal ridges, so the sup estimate is
    // random full-row sampling plus a coordinate-ascent refinement.
    {
        std::vector<double> ls, lv;
        GreenTable green(d);
        for (int s : {2, 3, 4, 5}) {
            GeometryTriple g = build_geometry(Shape::Ball, 3 * s, s, d);
            DensityModel m(g);
            const int nv = g.v.size(), na2 = g.boundary_a2.size();
            Rng rng(cfg.seed, 0x5c5 + static_cast<uint64_t>(s));
            std::vector<std::pair<int, int>> starts;
            for (int i = 0; i < 60; ++i)
                starts.emplace_back(rng.below(nv), rng.below(na2));
            starts.emplace_back(argmax_x(g.v), argmax_x(g.boundary_a2));
            double peak = 0;
            int bw = starts[0].first, by = starts[0].second, batom = 0;
            for (const auto &[iw, iy] : starts) {
                std::vector<double> dens =
                    m.density(g.v.points()[iw], g.boundary_a2.points()[iy]);
                for (int a = 0; a < m.space().n_pairs; ++a)
                    if (dens[a] > peak) {
                        peak = dens[a];
                        bw = iw;
                        by = iy;
                        batom = a;
                    }
            }
            int iw = bw, iy = by;
            for (int it = 0; it < 8; ++it) {
                std::vector<double> dens =
                    m.density(g.v.points()[iw], g.boundary_a2.points()[iy]);
                int besta = batom;
                for (int a = 0; a < m.space().n_pairs; ++a)
                    if (dens[a] > dens[besta]) besta = a;
                int iw0 = besta / nv, iy0 = besta % nv;
                double cur = dens[besta];
                int niw = iw, niy = iy;
                for (int wv = 0; wv < nv; ++wv)
                    for (int y = 0; y < na2; ++y) {
                        double e = m.exit_law()(wv, y);
                        if (!(e > 0)) continue;
                        double val = m.a_hit()(wv, iw0) * m.kg_pairs()(iw0, iy0) *
                                     m.q_exit()(iy0, y) / e;
                        if (val > cur) {
                            cur = val;
                            niw = wv;
                            niy = y;
                        }
                    }
                if (cur <= peak + 1e-15) break;
                peak = cur;
                iw = niw;
                iy = niy;
            }
            rep.row("peak_density_s" + std::to_string(s), -1, cfg.seed, peak);
            ls.push_back(std::log(double(s)));
            lv.push_back(std::log(peak));

            // recorded, not asserted: mean-soft-time to hit-probability ratio
            // pi * cap(V) * s / f over five pairs at two separations
            if (s == 2 || s == 4) {
                ClotheslineContext cl = make_clothesline_context(g, green, cfg.r_big_factor);
                const Pt w0 = g.boundary_a1.points()[argmax_x(g.boundary_a1)];
                const int iw0 = g.boundary_a1.index_of(w0);
                std::vector<int> order(g.v.size());
                for (int i = 0; i < g.v.size(); ++i) order[i] = i;
                std::sort(order.begin(), order.end(), [&](int a, int b) {
                    return norm2(sub(g.v.points()[a], w0, d), d) <
                           norm2(sub(g.v.points()[b], w0, d), d);
                });
                std::vector<int> picks;
                for (int rk : {0, 2, 8, 32, 128})
                    picks.push_back(order[std::min(rk, g.v.size() - 1)]);
                std::vector<double> pi(picks.size(), 0.0);
                const long long n_cl = 2000;
                Rng crng(cfg.seed, 0x91a + static_cast<uint64_t>(s));
                ClotheslineStart start{ClotheslineStart::Equilibrium, {}};
                for (long long j = 0; j < n_cl; ++j) {
                    ClotheslineRealization clr = sample_clothesline(cl, start, crng);
                    for (const auto &pr : clr.pairs) {
                        int jw = g.v.index_of(pr.w), jy = g.boundary_a2.index_of(pr.y);
                        for (size_t k = 0; k < picks.size(); ++k)
                            pi[k] += m.a_hit()(jw, iw0) * m.kg_pairs()(iw0, picks[k]) *
                                     m.q_exit()(picks[k], jy) / m.exit_law()(jw, jy);
                    }
                }
                for (size_t k = 0; k < picks.size(); ++k) {
                    double f = m.f_a1(w0, g.v.points()[picks[k]]);
                    double ratio = (pi[k] / n_cl) * cl.eq_v.total * s / f;
                    rep.row("pi_ratio_s" + std::to_string(s) + "_" + std::to_string(k), -1,
                            cfg.seed, ratio);
                }
            }
        }
        LinReg reg = linear_regression(ls, lv);
        rep.row("peak_density_slope", -1, cfg.seed, reg.slope);
        rep.summary["peak_density_slope"] = reg.slope;
        rep.flag("peak_density_slope_pm05", std::abs(reg.slope + 2.0 * (d - 1)) <= 0.5);
    }

    rep.runtime_sec = timer.seconds();
    return rep;
}

} // namespace rilab
