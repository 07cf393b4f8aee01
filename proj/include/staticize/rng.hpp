#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace staticize {

// Independent generator per (seed, stream name): adding a consumer never shifts
// another consumer's draws.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::mt19937_64 named_stream(std::uint64_t seed, std::string_view name) {
    const std::uint64_t h = fnv1a(name);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

} // namespace staticize
