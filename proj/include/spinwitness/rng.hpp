#pragma once

// Splittable seeded RNG. A master seed deterministically derives independent
// per-stream generators; no global state, identical sequences on any platform.

#include <cstdint>

namespace spinwitness {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 bits of mantissa.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Range [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream_id) {
    SplitMix64 g(master ^ (stream_id * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL));
    g.next();
    return g.next();
}

inline SplitMix64 stream_rng(std::uint64_t master, std::uint64_t stream_id) {
    return SplitMix64(derive_stream_seed(master, stream_id));
}

}  // namespace spinwitness
