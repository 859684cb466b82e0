#include "totsim/pattern.hpp"

#include <algorithm>

#include "totsim/errors.hpp"

namespace totsim {

BipolarPattern::BipolarPattern(std::vector<Unit> units) : units_(std::move(units)) {
    if (units_.empty()) throw DimensionError("pattern length must be at least 1");
    for (std::size_t i = 0; i < units_.size(); ++i) {
        if (units_[i] != 1 && units_[i] != -1) {
            throw ParameterError("pattern unit " + std::to_string(i) + " is " +
                                 std::to_string(units_[i]) + ", expected +1 or -1");
        }
    }
}

BipolarPattern BipolarPattern::parse(std::string_view text) {
    if (text.empty()) throw DimensionError("pattern string is empty");
    std::vector<Unit> units;
    units.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        switch (text[i]) {
            case '+': units.push_back(1); break;
            case '-': units.push_back(-1); break;
            default:
                throw ParameterError("pattern character " + std::to_string(i) +
                                     " is not '+' or '-'");
        }
    }
    return BipolarPattern(std::move(units));
}

BipolarPattern BipolarPattern::filled(std::size_t n, Unit value) {
    return BipolarPattern(std::vector<Unit>(n, value));
}

BipolarPattern BipolarPattern::negated() const {
    std::vector<Unit> out(units_.size());
    std::transform(units_.begin(), units_.end(), out.begin(),
                   [](Unit u) { return static_cast<Unit>(-u); });
    return BipolarPattern(std::move(out));
}

BipolarPattern BipolarPattern::with_flipped(std::span<const std::size_t> indices) const {
    std::vector<Unit> out = units_;
    for (std::size_t i : indices) {
        if (i >= out.size()) throw DimensionError("flip index out of range");
        out[i] = static_cast<Unit>(-out[i]);
    }
    return BipolarPattern(std::move(out));
}

std::string BipolarPattern::to_string() const {
    std::string s(units_.size(), '+');
    for (std::size_t i = 0; i < units_.size(); ++i) {
        if (units_[i] < 0) s[i] = '-';
    }
    return s;
}

BipolarPattern random_pattern(std::size_t n, RandomStream& rng) {
    if (n == 0) throw DimensionError("random_pattern: length must be at least 1");
    std::vector<BipolarPattern::Unit> units(n);
    for (auto& u : units) u = static_cast<BipolarPattern::Unit>(rng.sign());
    return BipolarPattern(std::move(units));
}

int overlap(const BipolarPattern& a, const BipolarPattern& b) {
    if (a.size() != b.size()) {
        throw DimensionError("overlap: lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " differ");
    }
    int sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

std::size_t hamming(const BipolarPattern& a, const BipolarPattern& b) {
    const int o = overlap(a, b);
    return static_cast<std::size_t>((static_cast<int>(a.size()) - o) / 2);
}

void SlotMap::add(std::string name, IndexRange range) {
    if (range.end <= range.begin) {
        throw DimensionError("slot '" + name + "' has an empty or reversed range");
    }
    if (slots_.contains(name)) throw ParameterError("duplicate slot '" + name + "'");
    for (const auto& [other, r] : slots_) {
        if (range.begin < r.end && r.begin < range.end) {
            throw DimensionError("slot '" + name + "' overlaps slot '" + other + "'");
        }
    }
    slots_.emplace(std::move(name), range);
}

void SlotMap::validate_for(std::size_t n) const {
    for (const auto& [name, r] : slots_) {
        if (r.end > n) {
            throw DimensionError("slot '" + name + "' ends at " + std::to_string(r.end) +
                                 " beyond pattern length " + std::to_string(n));
        }
    }
}

bool SlotMap::contains(std::string_view name) const { return slots_.find(name) != slots_.end(); }

const IndexRange& SlotMap::at(std::string_view name) const {
    auto it = slots_.find(name);
    if (it == slots_.end()) throw ParameterError("unknown slot '" + std::string(name) + "'");
    return it->second;
}

std::vector<std::size_t> SlotMap::indices_of(std::span<const std::string> names) const {
    std::vector<std::size_t> out;
    for (const auto& name : names) {
        const IndexRange& r = at(name);
        for (std::size_t i = r.begin; i < r.end; ++i) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::map<std::string, bool> slot_match(const BipolarPattern& output,
                                       const BipolarPattern& reference, const SlotMap& slots) {
    if (output.size() != reference.size()) throw DimensionError("slot_match: lengths differ");
    slots.validate_for(output.size());
    std::map<std::string, bool> result;
    for (const auto& [name, r] : slots.slots()) {
        bool same = true;
        for (std::size_t i = r.begin; i < r.end && same; ++i) same = output[i] == reference[i];
        result.emplace(name, same);
    }
    return result;
}

}  // namespace totsim
