#pragma once

#include <cstdint>
#include <random>

namespace scsa {

// splitmix64 finalizer; used only to mix stream coordinates into engine seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic substream addressed by (seed, a, b, c). All draws go through
// the explicit mappings below; std::*_distribution is never used, so the byte
// stream is identical across standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t state) : eng_(state) {}

    static RngStream derive(std::uint64_t seed, std::uint64_t a = 0,
                            std::uint64_t b = 0, std::uint64_t c = 0) {
        std::uint64_t s = mix64(seed);
        s = mix64(s ^ a);
        s = mix64(s ^ b);
        s = mix64(s ^ c);
        return RngStream(s);
    }

    std::uint64_t next_u64() { return eng_(); }

    // [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n); n > 0. Modulo bias is < n / 2^64, irrelevant at our n.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(next_u64() % n);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace scsa
