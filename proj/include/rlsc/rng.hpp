#pragma once

#include <cstdint>

namespace rlsc {

// Counter-based random words: every draw is a pure function of
// (seed, index, lane), so any slot of a trace can be regenerated
// independently of the others. The mixer is the SplitMix64 finalizer.

constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stream_word(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
    return mix64(mix64(seed ^ mix64(index)) + lane);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double unit_real(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Seed of the i-th child stream (rounds, sweep points, ...).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t i) {
    return mix64(base + 0xd1b54a32d192ed03ULL * (i + 1));
}

} // namespace rlsc
