// Counter-based random streams: the j-th variate of path k is a pure
// function of (seed, k, j), so adding paths never reshuffles existing ones
// and any path can be regenerated independently.
#pragma once

#include <cstdint>

namespace rbm {

/// splitmix64 finalizer over a combined (seed, stream, counter) word.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : base_(mix(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)))), counter_(0) {}

    /// uniform in (0, 1)
    double uniform() {
        const std::uint64_t z = mix(base_ + 0x9E3779B97F4A7C15ULL * (++counter_));
        return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
    }

    /// standard normal pair via Box-Muller
    void normal_pair(double& n1, double& n2);

    std::uint64_t counter() const { return counter_; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t base_;
    std::uint64_t counter_;
};

}  // namespace rbm
