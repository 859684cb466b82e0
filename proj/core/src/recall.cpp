#include "totsim/recall.hpp"

#include <algorithm>

#include "totsim/errors.hpp"

namespace totsim {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void RecallParams::validate() const {
    for (Component c : kComponents) {
        const std::string name(to_string(c));
        if (!in_unit_interval(cue_fraction[c])) {
            throw ParameterError("cue_fraction." + name + " must lie in [0, 1]");
        }
        if (max_attempts[c] < 1) throw ParameterError("max_attempts." + name + " must be >= 1");
    }
    if (!in_unit_interval(link_gain)) throw ParameterError("link_gain must lie in [0, 1]");
    if (!(chronometry.spike_ms > 0.0)) throw ParameterError("spike_ms must be > 0");
    if (!(chronometry.interval_ms >= 0.0)) throw ParameterError("interval_ms must be >= 0");
    if (!(strong_threshold > 0.0 && strong_threshold < 1.0)) {
        throw ParameterError("strong_threshold must lie in (0, 1)");
    }
}

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::Resolved: return "Resolved";
        case Classification::Tot: return "TOT";
        case Classification::NoAccess: return "NoAccess";
    }
    return "unknown";
}

std::optional<Classification> parse_classification(std::string_view s) {
    for (auto c : {Classification::Resolved, Classification::Tot, Classification::NoAccess}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

BipolarPattern generate_probe(const BipolarPattern& reference,
                              std::span<const std::size_t> cue_indices, RandomStream& rng) {
    const std::size_t n = reference.size();
    std::vector<std::uint8_t> cued(n, 0);
    for (std::size_t i : cue_indices) {
        if (i >= n) {
            throw DimensionError("generate_probe: cue index " + std::to_string(i) +
                                 " out of range for length " + std::to_string(n));
        }
        cued[i] = 1;
    }
    std::vector<BipolarPattern::Unit> units(n);
    for (std::size_t i = 0; i < n; ++i) {
        units[i] = cued[i] ? reference[i] : static_cast<BipolarPattern::Unit>(rng.sign());
    }
    return BipolarPattern(std::move(units));
}

std::vector<std::size_t> draw_cue_indices(std::size_t n, double q, RandomStream& rng) {
    if (!in_unit_interval(q)) throw ParameterError("cue fraction outside [0, 1]");
    auto idx = rng.sample(n, fraction_count(q, n));
    std::sort(idx.begin(), idx.end());
    return idx;
}

bool compare(const BipolarPattern& output, const BipolarPattern& reference) {
    if (output.size() != reference.size()) throw DimensionError("compare: lengths differ");
    return output == reference;
}

double chronometry(std::size_t attempts, double spike_ms, double interval_ms) {
    if (spike_ms < 0.0 || interval_ms < 0.0) {
        throw ParameterError("chronometry: durations must be non-negative");
    }
    if (attempts == 0) return 0.0;
    const auto a = static_cast<double>(attempts);
    return a * spike_ms + (a - 1.0) * interval_ms;
}

double chronometry(std::size_t attempts, const Chronometry& c) {
    return chronometry(attempts, c.spike_ms, c.interval_ms);
}

ComponentOutcome recall_component(const ComponentNetwork& net,
                                  const BipolarPattern& metamemory_ref, double q,
                                  std::size_t max_attempts, const Chronometry& chrono,
                                  RandomStream& rng, bool fixed_cues) {
    if (metamemory_ref.size() != net.size()) {
        throw DimensionError("recall_component: reference length " +
                             std::to_string(metamemory_ref.size()) + " != network size " +
                             std::to_string(net.size()));
    }
    if (!in_unit_interval(q)) throw ParameterError("recall_component: q outside [0, 1]");
    if (max_attempts < 1) throw ParameterError("recall_component: max_attempts must be >= 1");

    const int n = static_cast<int>(net.size());
    std::vector<std::size_t> cues;
    if (fixed_cues) cues = draw_cue_indices(net.size(), q, rng);

    ComponentOutcome out;
    out.attempted = true;
    int best = -n - 1;
    for (std::size_t t = 1; t <= max_attempts; ++t) {
        if (!fixed_cues) cues = draw_cue_indices(net.size(), q, rng);
        const BipolarPattern probe = generate_probe(metamemory_ref, cues, rng);
        BipolarPattern output = retrieve_once(net, probe);
        const int ov = overlap(output, metamemory_ref);
        out.attempts = t;
        const bool match = compare(output, metamemory_ref);
        if (ov > best) {
            best = ov;
            out.best_output = std::move(output);
        }
        if (match) {
            out.resolved = true;
            break;
        }
    }
    out.best_overlap_frac = static_cast<double>(best) / n;
    out.elapsed_ms = chronometry(out.attempts, chrono);
    return out;
}

std::pair<Classification, double> classify_outcome(
    const Selection& selection, const PerComponent<ComponentOutcome>& components) {
    if (!selection.selected) return {Classification::NoAccess, 0.0};
    const bool all = std::all_of(kComponents.begin(), kComponents.end(),
                                 [&](Component c) { return components[c].resolved; });
    if (all) return {Classification::Resolved, 1.0};
    return {Classification::Tot, std::max(0.0, components.phonological.best_overlap_frac)};
}

bool is_strong(const RecallOutcome& outcome, double strong_threshold) {
    return outcome.classification == Classification::Tot &&
           outcome.tot_strength >= strong_threshold;
}

RecallOutcome recall_word(const Lexicon& lex, const BipolarPattern& semantic_input,
                          const RecallParams& params, RandomStream& rng) {
    RecallOutcome result;
    result.selection = select_node(semantic_input, lex);
    const WordNode& node = lex.nodes()[result.selection.node_index];

    if (result.selection.selected) {
        result.word_id = node.id;
        const double masked = std::clamp(1.0 - result.selection.completeness, 0.0, 1.0);
        PerComponent<ComponentNetwork> episode{
            apply_mask(node.networks.semantic, masked, rng),
            apply_mask(node.networks.lexical, masked, rng),
            apply_mask(node.networks.phonological, masked, rng),
        };

        bool previous_resolved = true;
        for (std::size_t k = 0; k < kComponents.size(); ++k) {
            const Component c = kComponents[k];
            if (!previous_resolved) break;
            double q = params.cue_fraction[c];
            if (k > 0) q = std::min(1.0, q + params.link_gain);
            result.components[c] =
                recall_component(episode[c], node.metamemory_ref[c], q, params.max_attempts[c],
                                 params.chronometry, rng, params.fixed_cues);
            previous_resolved = result.components[c].resolved;
        }
    }

    std::tie(result.classification, result.tot_strength) =
        classify_outcome(result.selection, result.components);

    const ComponentOutcome& phon = result.components.phonological;
    if (phon.attempted && phon.best_output) {
        result.partial_info = slot_match(*phon.best_output, node.metamemory_ref.phonological,
                                         node.slots);
    } else {
        for (const auto& [name, range] : node.slots.slots()) result.partial_info[name] = false;
    }

    for (Component c : kComponents) result.total_time_ms += result.components[c].elapsed_ms;
    return result;
}

}  // namespace totsim
