#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "totsim/random.hpp"

namespace totsim {

/// Fixed-length vector of +1/-1 units. Every spike set, probe, network
/// output and piece of linguistic content is one of these.
class BipolarPattern {
public:
    using Unit = std::int8_t;

    /// Throws DimensionError on empty input and ParameterError on any unit
    /// other than +1 or -1.
    explicit BipolarPattern(std::vector<Unit> units);

    /// Parses the text form: one '+' or '-' per unit.
    static BipolarPattern parse(std::string_view text);

    static BipolarPattern filled(std::size_t n, Unit value);

    std::size_t size() const noexcept { return units_.size(); }
    Unit operator[](std::size_t i) const { return units_[i]; }
    std::span<const Unit> units() const noexcept { return units_; }

    BipolarPattern negated() const;
    BipolarPattern with_flipped(std::span<const std::size_t> indices) const;

    std::string to_string() const;

    bool operator==(const BipolarPattern&) const = default;

private:
    std::vector<Unit> units_;
};

BipolarPattern random_pattern(std::size_t n, RandomStream& rng);

/// Sum of unit-wise products, in [-N, N].
int overlap(const BipolarPattern& a, const BipolarPattern& b);

std::size_t hamming(const BipolarPattern& a, const BipolarPattern& b);

/// Half-open index range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
    bool operator==(const IndexRange&) const = default;
};

/// Named, pairwise-disjoint index ranges over one pattern length.
class SlotMap {
public:
    using Map = std::map<std::string, IndexRange, std::less<>>;

    SlotMap() = default;

    /// Throws DimensionError if a range is empty, reversed, or overlaps an
    /// existing slot, and ParameterError on a duplicate name.
    void add(std::string name, IndexRange range);

    /// Throws DimensionError if any slot reaches past `n`.
    void validate_for(std::size_t n) const;

    const Map& slots() const noexcept { return slots_; }
    bool empty() const noexcept { return slots_.empty(); }
    bool contains(std::string_view name) const;
    const IndexRange& at(std::string_view name) const;

    /// Sorted union of the indices of the named slots.
    std::vector<std::size_t> indices_of(std::span<const std::string> names) const;

    bool operator==(const SlotMap&) const = default;

private:
    Map slots_;
};

/// For every slot: true iff `output` equals `reference` on all of its indices.
std::map<std::string, bool> slot_match(const BipolarPattern& output,
                                       const BipolarPattern& reference,
                                       const SlotMap& slots);

}  // namespace totsim
