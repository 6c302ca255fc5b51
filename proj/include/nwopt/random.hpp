#pragma once

#include <cstdint>

namespace nwopt {

/// SplitMix64 finalizer; a bijection on 64-bit words with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Child seed for (base, index). Independent of the order in which indices
/// are visited, so parallel consumers stay reproducible.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept
{
    return mix64(mix64(base + 0x9e3779b97f4a7c15ULL) ^ mix64(index + 0x6a09e667f3bcc909ULL));
}

/// Counter-based stream: the i-th output is mix64(key + (i+1) * golden).
/// Bit-identical on every platform, unlike the std:: distributions.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) noexcept : state_(key) {}

    constexpr std::uint64_t next() noexcept
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform on [0,1) with 53 random bits.
    constexpr double uniform() noexcept
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace nwopt
