#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace trackmine {

/// Seeded generator with distribution helpers that produce the same stream
/// on every standard library (std::*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
        // Rejection sampling keeps the draw unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return static_cast<int>(lo + static_cast<std::int64_t>(v % span));
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

/// FNV-1a over the key, mixed with the global seed. Used to give each
/// independent task (image, video) its own reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ global_seed;
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    // splitmix64 finalizer
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

}  // namespace trackmine
