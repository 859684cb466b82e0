#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "totsim/assocnet.hpp"
#include "totsim/lexicon.hpp"
#include "totsim/pattern.hpp"
#include "totsim/random.hpp"

namespace totsim {

struct Chronometry {
    double spike_ms = 1.0;
    double interval_ms = 10.0;

    bool operator==(const Chronometry&) const = default;
};

struct RecallParams {
    /// Fraction q of probe units clamped to the reference, per component.
    PerComponent<double> cue_fraction{0.0, 0.0, 0.0};
    PerComponent<std::size_t> max_attempts{64, 64, 64};
    /// Cue bonus added to a component's q when the previous one resolved.
    double link_gain = 0.0;
    Chronometry chronometry;
    double strong_threshold = 0.7;
    /// Draw cue indices once per episode instead of once per attempt.
    bool fixed_cues = false;

    /// Throws ParameterError naming the offending field.
    void validate() const;

    bool operator==(const RecallParams&) const = default;
};

struct ComponentOutcome {
    bool attempted = false;
    bool resolved = false;
    std::size_t attempts = 0;
    /// max over attempts of overlap(output, reference) / N; 0 if never attempted.
    double best_overlap_frac = 0.0;
    double elapsed_ms = 0.0;
    /// First output that reached `best_overlap_frac`.
    std::optional<BipolarPattern> best_output;
};

enum class Classification { Resolved, Tot, NoAccess };

std::string_view to_string(Classification c);
std::optional<Classification> parse_classification(std::string_view s);

struct RecallOutcome {
    std::optional<std::string> word_id;
    Selection selection;
    PerComponent<ComponentOutcome> components;
    Classification classification = Classification::NoAccess;
    double tot_strength = 0.0;
    std::map<std::string, bool> partial_info;
    double total_time_ms = 0.0;
};

/// Probe for one attempt: reference values on `cue_indices`, fair coin
/// elsewhere (drawn in index order). Throws DimensionError on an index >= N.
BipolarPattern generate_probe(const BipolarPattern& reference,
                              std::span<const std::size_t> cue_indices, RandomStream& rng);

/// floor(q * n) distinct indices drawn uniformly, sorted.
std::vector<std::size_t> draw_cue_indices(std::size_t n, double q, RandomStream& rng);

/// Metamemory comparator: exact unit-wise equality.
bool compare(const BipolarPattern& output, const BipolarPattern& reference);

/// attempts * spike + max(0, attempts - 1) * interval.
double chronometry(std::size_t attempts, double spike_ms, double interval_ms);
double chronometry(std::size_t attempts, const Chronometry& c);

/// Attempt loop for one component: probe, retrieve, compare, stop on the
/// first exact match or after `max_attempts`.
ComponentOutcome recall_component(const ComponentNetwork& net,
                                  const BipolarPattern& metamemory_ref, double q,
                                  std::size_t max_attempts, const Chronometry& chrono,
                                  RandomStream& rng, bool fixed_cues = false);

std::pair<Classification, double> classify_outcome(
    const Selection& selection, const PerComponent<ComponentOutcome>& components);

/// tot_strength >= threshold, only meaningful for TOT outcomes.
bool is_strong(const RecallOutcome& outcome, double strong_threshold);

/// One recall episode over all three stages.
///
/// Stage 1 selects a node and masks 1 - c of every component on
/// episode-local copies. Components are then recalled in the order semantic,
/// lexical, phonological; each runs only if the previous one resolved, with
/// effective cue fraction min(1, q + link_gain). Priming is read from `lex`
/// but not advanced.
RecallOutcome recall_word(const Lexicon& lex, const BipolarPattern& semantic_input,
                          const RecallParams& params, RandomStream& rng);

}  // namespace totsim
