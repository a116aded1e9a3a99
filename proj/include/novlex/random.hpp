#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace novlex {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream keyed by a path of integers, e.g. (seed, generation, child).
/// The same key always yields the same stream regardless of thread scheduling.
inline Rng derive_stream(std::initializer_list<std::uint64_t> key)
{
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto k : key) {
        h = mix64(h ^ mix64(k));
    }
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Rng(seq);
}

// Stream purposes, used as the second key component.
namespace stream {
inline constexpr std::uint64_t cases = 1;
inline constexpr std::uint64_t init = 2;
inline constexpr std::uint64_t child = 3;
inline constexpr std::uint64_t archive = 4;
inline constexpr std::uint64_t simplify = 5;
} // namespace stream

inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(Rng& rng, double p)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

} // namespace novlex
