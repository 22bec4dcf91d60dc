#pragma once

#include <cstdint>
#include <random>

namespace revcut {

/// Seeded random stream. `split` derives an independent child stream from the
/// parent seed and a tag, so a single user seed reproduces every draw.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    Rng split(std::uint64_t tag) const { return Rng(mix(seed_ ^ mix(tag + 0x632be59bd9b4e019ULL))); }

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound). Rejection sampling keeps the result
    // independent of the standard library's distribution implementation.
    std::uint64_t uniform(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace revcut
