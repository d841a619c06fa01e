#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace fwsliding {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream: output i is mix64(key + i * golden) where
/// key is derived from (seed, stream). Streams with different ids are
/// independent, and the sequence is identical on every platform. The
/// distribution helpers are implemented here rather than taken from <random>
/// because the standard distributions are not portable bit-for-bit.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

    std::uint64_t next_u64() {
        ++counter_;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    /// Standard normal by Box-Muller; draws two uniforms per call.
    double normal() {
        const double u1 = uniform_open0();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, n), n > 0, by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % n;
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Named stream ids used by the instance generators.
enum class Stream : std::uint64_t {
    Pattern = 1,   ///< sparsity pattern of A
    Values = 2,    ///< nonzero values of A
    Planted = 3,   ///< planted solution
    Start = 4,     ///< solver starting vertex
    Probe = 5,     ///< random test points
};

inline CounterRng make_rng(std::uint64_t seed, Stream s) {
    return CounterRng(seed, static_cast<std::uint64_t>(s));
}

/// FNV-1a over the bytes of a double array; seeds deterministic starts.
inline std::uint64_t hash_doubles(std::span<const double> xs) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (double x : xs) {
        if (x == 0.0) x = 0.0;  // fold -0 into +0
        const auto *bytes = reinterpret_cast<const unsigned char *>(&x);
        for (std::size_t i = 0; i < sizeof(double); ++i) {
            h ^= bytes[i];
            h *= 0x100000001B3ULL;
        }
    }
    return h;
}

}  // namespace fwsliding
