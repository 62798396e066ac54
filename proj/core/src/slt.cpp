#include "rilab/slt.hpp"

#include <cmath>
#include <stdexcept>

namespace rilab {

PoissonSheet::PoissonSheet(const AtomSpace &space, uint64_t seed, uint64_t stream)
    : space_(&space), rng_(seed, stream), realized_(space.size()) {
    for (double m : space.mass)
        if (!(m > 0)) throw std::invalid_argument("atom masses must be positive");
}

double PoissonSheet::height(int atom, int j) const {
    auto &col = realized_[atom];
    const int n = space_->size();
    while (static_cast<int>(col.size()) <= j) {
        uint64_t idx = col.size();
        // counter (atom, idx) -> flat index, unique across the sheet
        uint64_t counter = idx * static_cast<uint64_t>(n) + static_cast<uint64_t>(atom);
        double gap = rng_.exponential(counter) / space_->mass[atom];
        col.push_back((col.empty() ? 0.0 : col.back()) + gap);
    }
    return col[j];
}

SltState::SltState(const PoissonSheet &sheet)
    : sheet_(&sheet), g_(sheet.space().size(), 0.0), next_(sheet.space().size(), 0) {}

SltStep SltState::step(const std::vector<double> &g) {
    const int n = sheet_->space().size();
    if (static_cast<int>(g.size()) != n) throw std::invalid_argument("density size mismatch");
    double total = 0;
    for (int a = 0; a < n; ++a) {
        if (g[a] < 0) throw std::invalid_argument("density has a negative entry");
        total += g[a] * sheet_->space().mass[a];
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("density does not integrate to 1");

    int best = -1;
    double best_xi = 0;
    for (int a = 0; a < n; ++a) {
        if (g[a] == 0) continue;
        double xi = (sheet_->height(a, next_[a]) - g_[a]) / g[a];
        if (best < 0 || xi < best_xi) {
            best = a;
            best_xi = xi;
        } else if (xi == best_xi) {
            ++ties_; // measure-zero event, surfaced rather than hidden
        }
    }
    if (best < 0) throw std::invalid_argument("density is identically zero");

    for (int a = 0; a < n; ++a) g_[a] += best_xi * g[a];
    used_.emplace_back(best, next_[best]);
    ++next_[best];
    hist_.push_back({best_xi, best});
    return hist_.back();
}

SltState run_slt(const PoissonSheet &sheet, const DensityProvider &provider, const StopRule &stop) {
    SltState st(sheet);
    while (!stop(st)) st.step(provider(st));
    return st;
}

DominanceResult dominance_certificate(const SltState &low, const SltState &high) {
    if (&low.sheet() != &high.sheet())
        throw std::invalid_argument("dominance check requires a shared sheet");
    const int n = low.sheet().space().size();
    for (int a = 0; a < n; ++a)
        if (low.g_accum()[a] > high.g_accum()[a] + 1e-9 * (1.0 + high.g_accum()[a]))
            return {false, a};
    // every point the low process consumed must sit below the high curve
    for (auto [a, j] : low.used())
        if (low.sheet().height(a, j) > high.g_accum()[a] + 1e-9 * (1.0 + high.g_accum()[a]))
            return {false, a};
    return {true, -1};
}

const Path &PathAttachment::get(int atom, int j) {
    auto key = std::make_pair(atom, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    // the point's own stream, so realization order cannot change its path
    uint64_t stream = splitmix64((static_cast<uint64_t>(atom) << 32) ^ static_cast<uint64_t>(j));
    Rng rng(seed_, stream);
    return memo_.emplace(key, sampler_(atom, rng)).first->second;
}

} // namespace rilab
