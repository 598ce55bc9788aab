#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pfde {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Configuration / ingestion problems: malformed files, bad keys, inconsistent
// dimensions, inadmissible initial data. CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A trajectory left the admissible range: finite-time blowup or instability.
// Carries the last time at which the state was still valid.
class BlowupError : public std::runtime_error {
public:
    BlowupError(const std::string& msg, double last_valid_time)
        : std::runtime_error(msg), last_time(last_valid_time) {}
    double last_time;
};

// Requested zero-section sampling but f(omega, x, 0, 0) != 0.
class ZeroSectionError : public std::runtime_error {
public:
    explicit ZeroSectionError(const std::string& msg) : std::runtime_error(msg) {}
};

// 64-bit FNV-1a. Used for config/manifest hashes; stable across runs.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v);

// Deterministic uniform doubles on top of a 64-bit state (splitmix64 core).
// Distribution code is ours so reports replay bit-for-bit on one platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

inline double neg_infinity() { return -std::numeric_limits<double>::infinity(); }

}  // namespace pfde
