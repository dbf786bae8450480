#pragma once

#include <cstdint>

namespace wxeb {

// splitmix64 finalizer; also used to derive sub-stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Purpose tags for stream splitting: every consumer of randomness draws from
// its own sub-stream of the master seed, so adding a stage never perturbs
// another stage's draws.
enum class RngPurpose : std::uint64_t {
    TableGen = 1,
    Sampling = 2,
    Splits = 3,
    Jackknife = 4,
};

inline std::uint64_t derive_seed(std::uint64_t master, RngPurpose purpose, std::uint64_t index = 0) {
    return mix64(master ^ mix64(static_cast<std::uint64_t>(purpose) ^ mix64(index)));
}

/// xoshiro256++, seeded through splitmix64. Deterministic across platforms.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& word : state_) {
            z += 0x9e3779b97f4a7c15ULL;
            word = mix64(z);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) without modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

}  // namespace wxeb
