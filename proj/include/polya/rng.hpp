#pragma once

#include <cstdint>

namespace polya {

// Splittable 64-bit-state uniform generator (splitmix64 mixing function).
// Every sampling routine in this library takes one of these by reference;
// callers own seeding and stream discipline, so runs are reproducible
// bit-for-bit across platforms.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t default_seed = 0x9e3779b97f4a7c15ull;

    explicit SplitMix64(std::uint64_t seed = default_seed) noexcept : state_(seed) {}

    std::uint64_t operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1) with 53 random bits.
    double next_double() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    // Uniform on the open interval (0,1); never returns an endpoint.
    double next_double_open() noexcept {
        return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
    }

    // Independent child stream; advances this generator once.
    SplitMix64 split() noexcept { return SplitMix64((*this)()); }

    std::uint64_t state() const noexcept { return state_; }

    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return ~0ull; }

private:
    std::uint64_t state_;
};

// Stable per-cell seed derivation so grid cells can be evaluated in any
// order (or concurrently) without changing output bytes.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
    SplitMix64 g(seed ^ (salt * 0xda942042e4dd58b5ull));
    return g();
}

} // namespace polya
