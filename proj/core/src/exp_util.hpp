#ifndef RILAB_EXP_UTIL_HPP
#define RILAB_EXP_UTIL_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>
#include <vector>

namespace rilab {

// Worker pool over rep indices.  Bodies must derive all randomness from the
// rep index, so scheduling cannot change any per-rep record.
template <typename F>
void for_reps(long long reps, int workers, F &&body) {
    if (workers <= 1 || reps < 2) {
        for (long long r = 0; r < reps; ++r) body(r);
        return;
    }
    std::atomic<long long> next{0};
    auto run = [&] {
        while (true) {
            long long r = next.fetch_add(1);
            if (r >= reps) return;
            body(r);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto &t : pool) t.join();
}

class Timer {
  public:
    Timer() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

inline double binom_se(double p, double n) { return std::sqrt(std::max(p * (1 - p), 1e-12) / n); }

} // namespace rilab

#endif
