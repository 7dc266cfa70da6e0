#pragma once

#include <cstdint>
#include <random>

namespace uavbs {

/// Named random streams derived from one master seed.
///
/// A sub-seed is `splitmix64(master ^ splitmix64(stream << 32 | index))`, so
/// stream `k` of agent `i` never depends on how many other agents exist.
enum class Stream : std::uint32_t {
    scene = 1,
    initial_position = 2,
    action = 3,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint32_t index = 0)
{
    const std::uint64_t key = (std::uint64_t(stream) << 32) | index;
    return splitmix64(master ^ splitmix64(key));
}

/// mt19937_64 with portable value mappings. The standard distributions are
/// implementation-defined, which would make traces differ across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n); n > 0.
    std::uint64_t below(std::uint64_t n)
    {
        // Rejection keeps the mapping unbiased.
        const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Uniform integer on [lo, hi].
    int between(int lo, int hi) { return lo + int(below(std::uint64_t(hi - lo) + 1)); }

private:
    std::mt19937_64 engine_;
};

} // namespace uavbs
