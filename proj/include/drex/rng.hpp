#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

// Deterministic random number generation with keyed substreams.
//
// Standard-library distributions are implementation-defined, so everything
// here is pinned: xoshiro256** for the stream, splitmix64 for seeding and key
// mixing, Box-Muller for normals. A substream keyed on (seed, a, b, c) yields
// the same sequence on every run and every thread count.

namespace drex::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() { return mix64(state_ += kGolden); }

private:
    std::uint64_t state_;
};

// xoshiro256** (Blackman & Vigna), state expanded from a 64-bit seed.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1]
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // standard normal via Box-Muller; consumes exactly two uniforms per call
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_;
};

// Module salts keep substreams of different consumers disjoint even under a
// shared master seed.
inline constexpr std::uint64_t kSaltSynthetic = 0x53594e54ULL;
inline constexpr std::uint64_t kSaltNullBand = 0x42414e44ULL;
inline constexpr std::uint64_t kSaltKmeans = 0x4b4d4e53ULL;

inline Xoshiro256 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                            std::uint64_t c = 0) {
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (a + kGolden + (h << 6) + (h >> 2)));
    h = mix64(h ^ (b + kGolden + (h << 6) + (h >> 2)));
    h = mix64(h ^ (c + kGolden + (h << 6) + (h >> 2)));
    return Xoshiro256(h);
}

}  // namespace drex::rng
