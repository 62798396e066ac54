#ifndef RILAB_RNG_HPP
#define RILAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rilab {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Seeded, stream-splittable xoshiro256++.  Same (seed, stream) reproduces the
// same draw sequence; distinct streams are independent for all practical
// purposes.
class Rng {
  public:
    Rng(uint64_t seed, uint64_t stream) {
        uint64_t x = splitmix64(seed) ^ splitmix64(0x5851f42d4c957f2dull * (stream + 1));
        for (auto &w : s_) {
            x = splitmix64(x);
            w = x;
        }
    }

    uint64_t next_u64() {
        uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return r;
    }

    // uniform in (0,1); never returns 0 so logs are safe
    double u01() { return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

    double exponential() { return -std::log(u01()); }

    // uniform integer in [0, n)
    uint32_t below(uint32_t n) {
        return static_cast<uint32_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Knuth product method; fine for the desk-scale means used here (< ~500)
    int poisson(double mean) {
        double l = std::exp(-mean), p = 1.0;
        int k = 0;
        do {
            ++k;
            p *= u01();
        } while (p > l);
        return k - 1;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

// Counter-based generator: value(i) depends only on (seed, i), so lazily
// realized Poisson sheets are independent of realization order.
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t stream)
        : base_(splitmix64(seed ^ 0x6a09e667f3bcc909ull) ^ splitmix64(stream * 0x9e3779b97f4a7c15ull + 1)) {}

    double u01(uint64_t counter) const {
        uint64_t v = splitmix64(base_ ^ (counter * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
        return (v >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double exponential(uint64_t counter) const { return -std::log(u01(counter)); }

  private:
    uint64_t base_;
};

} // namespace rilab

#endif
