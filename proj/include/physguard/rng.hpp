// Counter-based pseudo-random streams.
//
// Every draw is a pure function of (seed, stream id, draw index):
//   key       = mix64(seed + GAMMA * mix64(stream_id + GAMMA))
//   raw(i)    = mix64(key + GAMMA * (i + 1))
//   unit(i)   = (raw(i) >> 11) * 2^-53              in [0, 1)
//   gaussian  = sqrt(-2 ln u1) * cos(2 pi u2)        (Box-Muller, cosine branch;
//               consumes two raw draws, u1 taken from the (0, 1] mapping)
// where mix64 is the SplitMix64 finalizer and GAMMA = 0x9E3779B97F4A7C15.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace physguard::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream_id) {
    return mix64(seed + kGamma * mix64(stream_id + kGamma));
}

inline std::uint64_t raw_draw(std::uint64_t key, std::uint64_t index) {
    return mix64(key + kGamma * (index + 1));
}

// Top 53 bits as a double in [0, 1).
inline double to_unit(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

// Shifted mapping to (0, 1]; safe as a log() argument.
inline double to_unit_open(std::uint64_t raw) {
    return static_cast<double>((raw >> 11) + 1) * 0x1.0p-53;
}

class Stream {
public:
    Stream() = default;
    Stream(std::uint64_t seed, std::uint64_t stream_id) : key_(stream_key(seed, stream_id)) {}

    std::uint64_t next_raw() { return raw_draw(key_, counter_++); }
    double next_unit() { return to_unit(next_raw()); }

    double next_gaussian() {
        const double u1 = to_unit_open(next_raw());
        const double u2 = to_unit(next_raw());
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t draws_consumed() const { return counter_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace physguard::rng
