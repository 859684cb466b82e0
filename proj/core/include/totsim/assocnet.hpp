#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "totsim/pattern.hpp"
#include "totsim/random.hpp"

namespace totsim {

/// A learned two-layer auto-associative network for one word component.
///
/// Weights follow the Hebbian outer-product rule with the diagonal kept:
///
///     W = (1/n) * sum_k p_k p_k^T
///
/// They are stored as the integer sums `sum_k p_k[i] p_k[j]` with the common
/// factor 1/n applied only when a weight is read. Retrieval only needs the
/// sign of each activation, so the integer form keeps ties (activation
/// exactly 0) exact.
///
/// Networks are immutable values. `damage` and `apply_mask` return new
/// networks; any number of threads may retrieve from one instance.
class ComponentNetwork {
public:
    std::size_t size() const noexcept { return n_; }

    /// W[i][j] as a real number.
    double weight(std::size_t i, std::size_t j) const;

    /// Unscaled Hebbian sum behind W[i][j], i.e. n * W[i][j].
    std::int32_t hebbian_sum(std::size_t i, std::size_t j) const { return sums_[i * n_ + j]; }

    const std::vector<BipolarPattern>& stored() const noexcept { return stored_; }
    double damage_fraction() const noexcept { return damage_fraction_; }

    /// Sorted indices of deactivated units.
    const std::vector<std::size_t>& masked() const noexcept { return masked_indices_; }
    bool is_masked(std::size_t i) const { return mask_[i] != 0; }

    /// Sorted indices excluded from random damage and masking.
    const std::vector<std::size_t>& protected_units() const noexcept { return protected_; }

    bool is_symmetric() const;

    /// Weight matrix as rows of decimal numbers, row-major, one row per line.
    std::string dump_weights() const;

private:
    ComponentNetwork() = default;

    friend ComponentNetwork train(std::span<const BipolarPattern> patterns);
    friend ComponentNetwork damage(const ComponentNetwork& net, double d, RandomStream& rng,
                                   std::span<const std::size_t> protected_units);
    friend ComponentNetwork apply_mask(const ComponentNetwork& net, double fraction,
                                       RandomStream& rng);
    friend BipolarPattern retrieve_once(const ComponentNetwork& net, const BipolarPattern& probe);

    std::size_t n_ = 0;
    std::vector<std::int32_t> sums_;
    std::vector<BipolarPattern> stored_;
    double damage_fraction_ = 0.0;
    std::vector<std::uint8_t> mask_;
    std::vector<std::size_t> masked_indices_;
    std::vector<std::size_t> protected_;
};

/// Throws TrainingError on an empty list or mixed lengths.
ComponentNetwork train(std::span<const BipolarPattern> patterns);

/// One synchronous pass: out[i] = sgn(sum_j W[i][j] * probe[j]) with
/// sgn(0) = +1. Masked inputs contribute nothing; masked outputs are +1.
BipolarPattern retrieve_once(const ComponentNetwork& net, const BipolarPattern& probe);

/// Zeroes floor(d * M) symmetric weight pairs {i, j} (i <= j, diagonal
/// included) chosen uniformly among the M pairs that touch no protected unit.
/// With no protected units M = n(n+1)/2. The protected set is recorded on
/// the result and later honoured by `apply_mask`.
ComponentNetwork damage(const ComponentNetwork& net, double d, RandomStream& rng,
                        std::span<const std::size_t> protected_units = {});

/// Replaces the mask with floor(fraction * m) units chosen uniformly among
/// the m unprotected units (m = n when nothing is protected).
ComponentNetwork apply_mask(const ComponentNetwork& net, double fraction, RandomStream& rng);

/// floor(x * count) tolerant of representation error in x (0.9 * 120 etc.).
std::size_t fraction_count(double x, std::size_t count);

}  // namespace totsim
