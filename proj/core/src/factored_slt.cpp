#include "rilab/factored_slt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rilab {

FactorTables make_factor_tables(const DensityModel &m) {
    FactorTables t;
    t.model = &m;
    t.nw0 = m.geom().boundary_a1.size();
    t.nv = m.geom().v.size();
    t.na2 = m.geom().boundary_a2.size();
    t.n_atoms = t.nw0 * t.nv + 1;
    t.kg.resize(static_cast<size_t>(t.nw0) * t.nv);
    for (int iw0 = 0; iw0 < t.nw0; ++iw0)
        for (int iy0 = 0; iy0 < t.nv; ++iy0)
            t.kg[static_cast<size_t>(iw0) * t.nv + iy0] =
                static_cast<float>(m.kg_pairs()(iw0, iy0));
    return t;
}

FactoredSheet::FactoredSheet(int n_atoms, uint64_t seed, uint64_t stream)
    : n_(n_atoms), rng_(seed, stream) {
    if (n_atoms <= 0) throw std::invalid_argument("empty atom space");
}

const std::vector<float> &FactoredSheet::first() const {
    if (first_.empty()) {
        first_.resize(n_);
        for (int a = 0; a < n_; ++a) first_[a] = static_cast<float>(gap(a, 0));
    }
    return first_;
}

FactoredProcess::FactoredProcess(const FactorTables &t, const FactoredSheet &sheet)
    : t_(&t), sheet_(&sheet), h1_(sheet.first()), g_(t.n_atoms, 0.0f) {
    if (sheet.size() != t.n_atoms) throw std::invalid_argument("sheet size mismatch");
    aw_.resize(t.nw0);
    qc_.resize(t.nv);
}

int FactoredProcess::consumed(int atom) const {
    auto it = next_.find(atom);
    return it == next_.end() ? 0 : it->second;
}

SltStep FactoredProcess::step(int iw, int iy) {
    const DensityModel &m = *t_->model;
    const int nw0 = t_->nw0, nv = t_->nv;
    double e = m.exit_law()(iw, iy);
    if (!(e > 0)) throw std::invalid_argument("excursion source has zero exit mass");
    for (int iw0 = 0; iw0 < nw0; ++iw0)
        aw_[iw0] = static_cast<float>(m.a_hit()(iw, iw0) / e);
    for (int iy0 = 0; iy0 < nv; ++iy0) qc_[iy0] = static_cast<float>(m.q_exit()(iy0, iy));

    const float *kg = t_->kg.data();
    const float *h1 = h1_.data();
    const float *gp = g_.data();

    // fused min-ratio scan; the density total feeds the Theta complement.
    // Index tracking would block vectorization, so each row takes a straight
    // min reduction and only a row that improves the global best is rescanned
    // for its argmin.
    if (static_cast<int>(gbuf_.size()) != nv) {
        gbuf_.resize(nv);
        rbuf_.resize(nv);
    }
    float *gbuf = gbuf_.data();
    float *rbuf = rbuf_.data();
    const float *qc = qc_.data();
    float best_r = std::numeric_limits<float>::infinity();
    int best = -1;
    double sum_g = 0;
    for (int iw0 = 0; iw0 < nw0; ++iw0) {
        const float c = aw_[iw0];
        const size_t base = static_cast<size_t>(iw0) * nv;
        for (int iy0 = 0; iy0 < nv; ++iy0) {
            float gv = c * kg[base + iy0] * qc[iy0];
            gbuf[iy0] = gv;
            rbuf[iy0] = (h1[base + iy0] - gp[base + iy0]) / gv;
        }
        float m0 = std::numeric_limits<float>::infinity(), m1 = m0, m2 = m0, m3 = m0;
        float s0 = 0, s1 = 0, s2 = 0, s3 = 0;
        int iy0 = 0;
        for (; iy0 + 4 <= nv; iy0 += 4) {
            m0 = std::min(m0, rbuf[iy0]);
            m1 = std::min(m1, rbuf[iy0 + 1]);
            m2 = std::min(m2, rbuf[iy0 + 2]);
            m3 = std::min(m3, rbuf[iy0 + 3]);
            s0 += gbuf[iy0];
            s1 += gbuf[iy0 + 1];
            s2 += gbuf[iy0 + 2];
            s3 += gbuf[iy0 + 3];
        }
        for (; iy0 < nv; ++iy0) {
            m0 = std::min(m0, rbuf[iy0]);
            s0 += gbuf[iy0];
        }
        float row_min = std::min(std::min(m0, m1), std::min(m2, m3));
        sum_g += double(s0) + double(s1) + double(s2) + double(s3);
        if (row_min < best_r) {
            best_r = row_min;
            for (int k = 0; k < nv; ++k)
                if (rbuf[k] == row_min) {
                    best = static_cast<int>(base) + k;
                    break;
                }
        }
    }
    double g_th = 1.0 - sum_g;
    if (g_th < -1e-4) throw std::runtime_error("factor tables inconsistent: negative Theta mass");
    if (g_th < 1e-12) g_th = 1e-12;
    const int theta = t_->n_atoms - 1;
    float r_th = static_cast<float>((double(h1_[theta]) - double(g_[theta])) / g_th);
    if (r_th < best_r) {
        best_r = r_th;
        best = theta;
    }
    // float accumulation can push the curve a hair past a near-tied point;
    // treat that as an immediate consumption
    if (best_r < 0) {
        if (best_r < -1e-3f) throw std::runtime_error("unused height below the accumulated curve");
        best_r = 0;
    }

    // accumulate xi * g and consume the chosen point
    float *gw = g_.data();
    for (int iw0 = 0; iw0 < nw0; ++iw0) {
        const float c = best_r * aw_[iw0];
        const size_t base = static_cast<size_t>(iw0) * nv;
        for (int iy0 = 0; iy0 < nv; ++iy0) gw[base + iy0] += c * kg[base + iy0] * qc_[iy0];
    }
    g_[theta] += static_cast<float>(best_r * g_th);
    int j = next_[best]++;
    used_.emplace_back(best, j);
    h1_[best] += static_cast<float>(sheet_->gap(best, j + 1));
    return {best_r, best};
}

FactoredDominance factored_dominance(const FactoredProcess &low, const FactoredProcess &high,
                                     double tol) {
    if (&low.sheet() != &high.sheet())
        throw std::invalid_argument("dominance check requires a shared sheet");
    const auto &gl = low.g();
    const auto &gh = high.g();
    for (size_t a = 0; a < gl.size(); ++a)
        if (gl[a] > gh[a] + tol * (1.0 + gh[a])) return {false, static_cast<int>(a)};
    // every point low consumed must sit below high's curve
    for (auto [a, j] : low.used()) {
        if (j < high.consumed(a)) continue;
        double h = 0;
        for (int i = 0; i <= j; ++i) h += low.sheet().gap(a, i);
        if (h > gh[a] + tol * (1.0 + gh[a])) return {false, a};
    }
    return {true, -1};
}

} // namespace rilab
