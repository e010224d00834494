#pragma once

#include <cstdint>

namespace oitlab {

// splitmix64 (Steele, Lea, Flood 2014). Used everywhere a deterministic,
// platform-independent random stream is needed; std:: distributions are
// implementation-defined and would break byte-reproducibility guarantees.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// One-shot hash of a 64-bit value through the splitmix64 mixer.
constexpr std::uint64_t splitmix64_hash(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64(s);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0,1) from the top 53 bits, exactly representable in a double.
    constexpr double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    constexpr double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Uniform integer in [0, bound) via 128-bit multiply; no modulo bias
    // that depends on library internals.
    constexpr std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

// Per-pixel opacity hash: uniform double in [0,1) as a pure function of
// (seed, object_id, pixel_index). The 64-bit mix is part of the on-disk
// contract for reproducing procedurally generated scenes.
inline double per_pixel_uniform(std::uint64_t seed, std::uint64_t object_id,
                                std::uint64_t pixel_index) {
    std::uint64_t state = seed ^ (object_id * 0x9E3779B97F4A7C15ULL) ^ pixel_index;
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace oitlab
