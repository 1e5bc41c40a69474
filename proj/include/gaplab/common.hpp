#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaplab {

inline constexpr const char* kVersion = "0.1.0";

// Error taxonomy shared by all modules.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidMoveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingBoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidRatesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReducibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a, used for config hashing and occupation-vector hashing.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t hash_ints(const std::vector<int>& v) {
    return fnv1a64(v.data(), v.size() * sizeof(int));
}

// splitmix64; used to derive deterministic per-triple test values without
// materializing random tables.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// uniform in [-1, 1]
inline double hashed_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(a ^ splitmix64(b ^ splitmix64(c))));
    return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
}

inline double rel_err(double lhs, double rhs, double floor_scale = 0.0) {
    double denom = std::max({std::abs(lhs), std::abs(rhs), floor_scale, 1e-300});
    return std::abs(lhs - rhs) / denom;
}

}  // namespace gaplab
