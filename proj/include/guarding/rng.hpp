#pragma once
/// @file rng.hpp
/// @brief Counter-based deterministic random numbers for verification suites.
///
/// A keyed splitmix-style mixer: draw i of stream k is a pure function of
/// (seed, k, i), so suites can replay any case from the recorded seed and
/// substreams can be handed to parallel workers without coordination.

#include <cstdint>

namespace guarding {

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(detail::mix64(seed ^ (stream * 0xd1342543de82ef95ULL + detail::kGolden))) {}

    /// Independent substream derived from this generator's key.
    [[nodiscard]] CounterRng split(std::uint64_t stream) const {
        CounterRng r(key_, stream + 1);
        return r;
    }

    std::uint64_t next_u64() { return detail::mix64(key_ + (++counter_) * detail::kGolden); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace guarding
