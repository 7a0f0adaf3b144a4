#pragma once

// Counter-based random streams for bootstrap replicates.
//
// Replicate i of an analysis seeded with `master_seed` draws from the stream
//
//     key     = mix64(master_seed ^ mix64(i + GOLDEN))
//     x_j     = mix64(key + (j + 1) * GOLDEN)        j = 0, 1, 2, ...
//
// where mix64 is the SplitMix64 finalizer and GOLDEN = 0x9E3779B97F4A7C15.
// A bounded index in [0, n) is taken from x_j by the multiply-shift map
// floor(x_j * n / 2^64), with no rejection, so one draw consumes exactly one
// 64-bit value. The stream is a pure function of (master_seed, i).

#include <cstddef>
#include <cstdint>

namespace rankbench {

__extension__ using uint128_t = unsigned __int128;

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class ReplicateStream {
public:
    constexpr ReplicateStream(std::uint64_t master_seed, std::uint64_t replicate_index)
        : key_(mix64(master_seed ^ mix64(replicate_index + kGolden))) {}

    constexpr std::uint64_t next() {
        ++counter_;
        return mix64(key_ + counter_ * kGolden);
    }

    /// Uniform index in [0, n); n must be > 0.
    constexpr std::size_t bounded(std::size_t n) {
        const auto wide = static_cast<uint128_t>(next()) * static_cast<std::uint64_t>(n);
        return static_cast<std::size_t>(wide >> 64);
    }

    constexpr std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace rankbench
