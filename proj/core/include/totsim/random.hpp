#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace totsim {

/// A single-owner seeded random stream.
///
/// All draws are built from raw 64-bit engine output with hand-written
/// reductions, so sequences are identical across standard libraries
/// (std::*_distribution is implementation-defined and is not used).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64();

    /// Fair coin as a bipolar unit: +1 or -1.
    int sign();

    /// Uniform integer in [0, n). `n` must be positive.
    std::size_t uniform_index(std::size_t n);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// `k` distinct indices drawn uniformly from `candidates`, in draw order.
    std::vector<std::size_t> sample(std::vector<std::size_t> candidates, std::size_t k);

    /// `k` distinct indices drawn uniformly from [0, n), in draw order.
    std::vector<std::size_t> sample(std::size_t n, std::size_t k);

    /// Independent stream derived from this stream's seed and `key`.
    /// Does not advance this stream.
    RandomStream child(std::uint64_t key) const;

    /// Seed that `child(key)` would use.
    std::uint64_t child_seed(std::uint64_t key) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace totsim
