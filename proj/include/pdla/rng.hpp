/*
 * Counter-based random number generator for reproducible chains.
 *
 * Generator: SplitMix64. The i-th output is mix64(key + i*GOLDEN) where
 * mix64 is the SplitMix64 finalizer and key is derived from (seed, stream),
 * so a draw depends only on (seed, stream, counter) and sequences are
 * bitwise reproducible across platforms. Distinct streams (one per chain)
 * are decorrelated by hashing the stream index into the key.
 *
 * Uniforms map the top 53 bits into (0,1); normals use the Box-Muller
 * transform, consuming exactly two uniforms per variate.
 */
#pragma once

#include <cmath>
#include <cstdint>

#include "pdla/field.hpp"

namespace pdla {

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(mix64(seed) ^ mix64(stream + 0x1234567989ABCDEFULL))) {}

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + counter_ * GOLDEN;
        ++counter_;
        return mix64(z);
    }

    // uniform in the open interval (0,1)
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Box-Muller (two uniforms per draw)
    double next_normal() {
        double u1 = next_uniform();
        double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(TWO_PI * u2);
    }

    RealField normal_field(Shape shape) {
        RealField f(shape);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = next_normal();
        return f;
    }

    std::uint64_t counter() const { return counter_; }

private:
    static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL;
    static constexpr double TWO_PI = 6.283185307179586476925286766559;

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace pdla
