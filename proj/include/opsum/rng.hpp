#pragma once

#include <cstdint>
#include <vector>

namespace opsum {

// SplitMix64 generator. Hand-rolled so that streams are reproducible
// bit-for-bit across platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // [0, n)
    std::size_t next_below(std::size_t n) {
        return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Fixed offsets fanning one global seed out to independent component streams.
namespace seed_offset {
inline constexpr std::uint64_t kAspectInit = 0x11;
inline constexpr std::uint64_t kAspectShuffle = 0x12;
inline constexpr std::uint64_t kAspectNegatives = 0x13;
inline constexpr std::uint64_t kAspectDomainBatch = 0x14;
inline constexpr std::uint64_t kAspectDomainInit = 0x15;
inline constexpr std::uint64_t kAspectKmeans = 0x16;
inline constexpr std::uint64_t kMilInit = 0x21;
inline constexpr std::uint64_t kMilShuffle = 0x22;
inline constexpr std::uint64_t kRandomSummary = 0x31;
}  // namespace seed_offset

}  // namespace opsum
