#include "totsim/assocnet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "totsim/errors.hpp"

namespace totsim {

double ComponentNetwork::weight(std::size_t i, std::size_t j) const {
    return static_cast<double>(sums_[i * n_ + j]) / static_cast<double>(n_);
}

bool ComponentNetwork::is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (sums_[i * n_ + j] != sums_[j * n_ + i]) return false;
        }
    }
    return true;
}

std::string ComponentNetwork::dump_weights() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (j) os << ' ';
            os << weight(i, j);
        }
        os << '\n';
    }
    return os.str();
}

std::size_t fraction_count(double x, std::size_t count) {
    return static_cast<std::size_t>(std::floor(x * static_cast<double>(count) + 1e-9));
}

ComponentNetwork train(std::span<const BipolarPattern> patterns) {
    if (patterns.empty()) throw TrainingError("train: no patterns given");
    const std::size_t n = patterns.front().size();
    for (const auto& p : patterns) {
        if (p.size() != n) throw TrainingError("train: patterns have mixed lengths");
    }

    ComponentNetwork net;
    net.n_ = n;
    net.sums_.assign(n * n, 0);
    for (const auto& p : patterns) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::int32_t pi = p[i];
            std::int32_t* row = &net.sums_[i * n];
            for (std::size_t j = 0; j < n; ++j) row[j] += pi * p[j];
        }
    }
    net.stored_.assign(patterns.begin(), patterns.end());
    net.mask_.assign(n, 0);
    return net;
}

BipolarPattern retrieve_once(const ComponentNetwork& net, const BipolarPattern& probe) {
    const std::size_t n = net.n_;
    if (probe.size() != n) {
        throw DimensionError("retrieve_once: probe length " + std::to_string(probe.size()) +
                             " != network size " + std::to_string(n));
    }
    const auto units = probe.units();
    std::vector<BipolarPattern::Unit> out(n, 1);
    std::vector<std::int32_t> input(n);
    for (std::size_t j = 0; j < n; ++j) input[j] = net.mask_[j] ? 0 : units[j];

    for (std::size_t i = 0; i < n; ++i) {
        if (net.mask_[i]) continue;
        const std::int32_t* row = &net.sums_[i * n];
        std::int64_t act = 0;
        for (std::size_t j = 0; j < n; ++j) act += static_cast<std::int64_t>(row[j]) * input[j];
        out[i] = act >= 0 ? 1 : -1;
    }
    return BipolarPattern(std::move(out));
}

ComponentNetwork damage(const ComponentNetwork& net, double d, RandomStream& rng,
                        std::span<const std::size_t> protected_units) {
    if (!(d >= 0.0 && d <= 1.0)) {
        throw ParameterError("damage: fraction " + std::to_string(d) + " outside [0, 1]");
    }
    const std::size_t n = net.n_;
    std::vector<std::size_t> prot(net.protected_);
    for (std::size_t i : protected_units) {
        if (i >= n) throw DimensionError("damage: protected index out of range");
        prot.push_back(i);
    }
    std::sort(prot.begin(), prot.end());
    prot.erase(std::unique(prot.begin(), prot.end()), prot.end());

    std::vector<std::uint8_t> is_prot(n, 0);
    for (std::size_t i : prot) is_prot[i] = 1;

    // Eligible unordered pairs {i, j}, i <= j, encoded as i * n + j.
    std::vector<std::size_t> pairs;
    pairs.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        if (is_prot[i]) continue;
        for (std::size_t j = i; j < n; ++j) {
            if (!is_prot[j]) pairs.push_back(i * n + j);
        }
    }
    const std::size_t count = fraction_count(d, pairs.size());

    ComponentNetwork out = net;
    for (std::size_t code : rng.sample(std::move(pairs), count)) {
        const std::size_t i = code / n;
        const std::size_t j = code % n;
        out.sums_[i * n + j] = 0;
        out.sums_[j * n + i] = 0;
    }
    out.damage_fraction_ = d;
    out.protected_ = std::move(prot);
    return out;
}

ComponentNetwork apply_mask(const ComponentNetwork& net, double fraction, RandomStream& rng) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw ParameterError("apply_mask: fraction " + std::to_string(fraction) +
                             " outside [0, 1]");
    }
    std::vector<std::size_t> eligible;
    eligible.reserve(net.n_);
    for (std::size_t i = 0; i < net.n_; ++i) {
        if (!std::binary_search(net.protected_.begin(), net.protected_.end(), i)) {
            eligible.push_back(i);
        }
    }
    const std::size_t count = fraction_count(fraction, eligible.size());

    ComponentNetwork out = net;
    out.mask_.assign(net.n_, 0);
    out.masked_indices_ = rng.sample(std::move(eligible), count);
    std::sort(out.masked_indices_.begin(), out.masked_indices_.end());
    for (std::size_t i : out.masked_indices_) out.mask_[i] = 1;
    return out;
}

}  // namespace totsim
