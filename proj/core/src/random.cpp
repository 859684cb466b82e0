#include "totsim/random.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace totsim {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

int RandomStream::sign() {
    if (bits_left_ == 0) {
        bit_buffer_ = engine_();
        bits_left_ = 64;
    }
    const int bit = static_cast<int>(bit_buffer_ & 1U);
    bit_buffer_ >>= 1;
    --bits_left_;
    return bit ? 1 : -1;
}

std::size_t RandomStream::uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t range = n;
    // Reject the incomplete top block so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % range);
}

double RandomStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> RandomStream::sample(std::vector<std::size_t> candidates,
                                              std::size_t k) {
    if (k > candidates.size()) throw std::invalid_argument("sample: k exceeds population");
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_index(candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(k);
    return candidates;
}

std::vector<std::size_t> RandomStream::sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return sample(std::move(all), k);
}

std::uint64_t RandomStream::child_seed(std::uint64_t key) const {
    return splitmix64(seed_ ^ splitmix64(key ^ 0xA0761D6478BD642FULL));
}

RandomStream RandomStream::child(std::uint64_t key) const { return RandomStream(child_seed(key)); }

}  // namespace totsim
