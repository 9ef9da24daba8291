#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ids {

// splitmix64 step; used to derive independent substreams from a base
// seed plus a tag so results do not depend on task scheduling.
inline std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// mt19937_64 with explicit, platform-independent draw helpers. The
// std distributions are implementation-defined, which would break the
// byte-identical report guarantee across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) {
        // modulo rejection to avoid bias
        const std::uint64_t limit = ~0ull - (~0ull % bound + 1) % bound;
        std::uint64_t v = engine_();
        while (v > limit) v = engine_();
        return v % bound;
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // standard normal via Box-Muller (one draw per call, no caching,
    // so substream splits stay deterministic)
    double next_normal() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[next_below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ids
