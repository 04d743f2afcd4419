// Counter-based seeded random streams.
//
// Every random quantity in the library is a pure function of a 64-bit stream
// key and a draw counter, so trials can be generated in any order, on any
// number of threads, and still reproduce bit-for-bit.
#pragma once

#include <cstdint>

#include "covertctl/normal.hpp"

namespace covertctl {

/// SplitMix64 finalizer; bijective on uint64.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a child stream key. Injective in `label` for a fixed parent key.
inline std::uint64_t derive_stream(std::uint64_t key, std::uint64_t label) {
    constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
    return mix64(key ^ mix64(label + golden));
}

/// Counter-mode generator: the n-th output is mix64(key + n*golden),
/// i.e. SplitMix64 with random access. One uniform is consumed per draw,
/// Gaussian variates go through the normal quantile so that truncated
/// sampling follows the identical path.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() {
        constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
        return mix64(key_ + golden * ++counter_);
    }

    /// Uniform on the open interval (0,1); never returns 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via inverse-CDF of the uniform stream.
    double next_standard_normal() { return normal_quantile(next_uniform()); }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace covertctl
