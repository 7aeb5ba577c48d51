#ifndef GARI_RNG_HPP
#define GARI_RNG_HPP

#include <cstdint>

namespace gari {

/// Splittable counter-based generator built on the splitmix64 mixing
/// function. A stream is keyed by (seed, a, b); outputs are the mixes of an
/// incrementing counter, so streams derived from the same seed are
/// independent and reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0)
        : key_(mix(mix(mix(seed) ^ a) ^ b)), counter_(0) {}

    static constexpr const char* name() { return "splitmix64"; }

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace gari

#endif
