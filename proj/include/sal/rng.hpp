#pragma once

#include <cstdint>

namespace sal {

/// Deterministic 64-bit generator (splitmix64). The output stream is a pure
/// function of the seed, bit-exact on every platform, which keeps seeded
/// runs reproducible end to end.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed), state_(seed) {}

    uint64_t seed() const { return seed_; }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n); n must be positive.
    int64_t below(int64_t n) {
        return static_cast<int64_t>(
            (static_cast<unsigned __int128>(next_u64()) * static_cast<uint64_t>(n)) >> 64);
    }

    bool coin(double p) { return uniform() < p; }

    /// Derives an independent child seed; used to give each synthetic sample
    /// its own stream.
    uint64_t fork() { return next_u64(); }

private:
    uint64_t seed_;
    uint64_t state_;
};

}  // namespace sal
