#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "totsim/assocnet.hpp"
#include "totsim/lexicon.hpp"
#include "totsim/pattern.hpp"
#include "totsim/recall.hpp"

namespace totsim {

struct DamageEntry {
    std::string word;
    Component component = Component::Phonological;
    double d = 0.0;
    /// Slot names (phonological slot map) whose units are never damaged or masked.
    std::vector<std::string> protected_slots;

    bool operator==(const DamageEntry&) const = default;
};

struct CorruptionEntry {
    std::string word;
    Component component = Component::Phonological;
    /// Number of metamemory reference units flipped, chosen per trial.
    std::size_t flips = 0;

    bool operator==(const CorruptionEntry&) const = default;
};

struct PrimingEntry {
    std::string word;
    double bonus = 0.0;
    /// Trials 0 .. decay_trials-1 see the bonus.
    std::size_t decay_trials = 0;

    bool operator==(const PrimingEntry&) const = default;
};

/// Optional grids. `q` overrides every component's cue fraction, `d`
/// overrides the fraction of every damage entry, `flip_rate` overrides the
/// semantic input flip rate.
struct SweepAxes {
    std::vector<double> q;
    std::vector<double> d;
    std::vector<double> flip_rate;

    bool operator==(const SweepAxes&) const = default;
};

struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::string label;
    LexiconSpec lexicon;
    std::string target;
    double semantic_input_flip_rate = 0.0;
    RecallParams recall;
    std::vector<DamageEntry> damage;
    std::vector<CorruptionEntry> metamemory_corruption;
    std::vector<PrimingEntry> priming;
    std::size_t episodes_per_trial = 1;
    std::size_t n_trials = 1;
    std::optional<SweepAxes> sweep;

    /// Range and cross-reference checks that need no lexicon. Throws
    /// ConfigError with a field path.
    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

struct SweepPoint {
    std::size_t index = 0;
    std::optional<double> q;
    std::optional<double> d;
    std::optional<double> flip_rate;
};

/// Cartesian product of the declared axes, q outermost, flip rate innermost.
/// A config without sweep axes has a single point with no coordinates.
std::vector<SweepPoint> sweep_points(const ScenarioConfig& cfg);

struct TrialRecord {
    std::size_t trial = 0;
    std::size_t sweep_index = 0;
    std::optional<double> sweep_q;
    std::optional<double> sweep_d;
    std::optional<double> sweep_flip_rate;
    /// 1-based.
    std::size_t episode = 1;
    Classification classification = Classification::NoAccess;
    std::optional<std::string> selected_word;
    double sel_completeness = 0.0;
    PerComponent<std::size_t> attempts{0, 0, 0};
    PerComponent<bool> resolved{false, false, false};
    double tot_strength = 0.0;
    bool strong = false;
    std::map<std::string, bool> partial_info;
    double total_time_ms = 0.0;
    std::uint64_t seed_child = 0;

    bool operator==(const TrialRecord&) const = default;
};

/// Key of the lexicon-construction stream under the master seed. Trial
/// streams use the trial index as key, so the two never collide for any
/// realistic trial count.
inline constexpr std::uint64_t kLexiconStreamKey = 0xFFFF'FFFF'FFFF'0001ULL;

/// Monte Carlo runner. Per sweep point and trial, draws damage, metamemory
/// corruption and the semantic input from the trial's child stream (keyed by
/// trial index), then runs up to episodes_per_trial recall episodes,
/// stopping after the first Resolved one. Output order is (point, trial,
/// episode) and does not depend on `workers`.
std::vector<TrialRecord> run_trials(const ScenarioConfig& cfg, std::size_t workers = 1);

/// Lexicon exactly as run_trials builds it for `cfg`, before any per-trial
/// damage or corruption.
Lexicon build_scenario_lexicon(const ScenarioConfig& cfg);

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    /// Reduces to lowest terms. `den` must be nonzero.
    static Rational reduced(std::uint64_t num, std::uint64_t den);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
    /// Exact comparison by cross multiplication.
    bool operator<(const Rational& other) const;
    bool operator<=(const Rational& other) const { return !(other < *this); }
};

inline constexpr std::size_t kMaxEnumeratedFreeUnits = 24;

/// Exact per-attempt success probability with the cue fixed on
/// `cue_indices`: enumerates every assignment of the remaining units and
/// counts those whose one-pass output equals `metamemory_ref`. Throws
/// CapacityError past kMaxEnumeratedFreeUnits free units.
Rational exact_success_prob(const ComponentNetwork& net, const BipolarPattern& metamemory_ref,
                            std::span<const std::size_t> cue_indices);

struct RateEstimate {
    double rate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

struct SummaryRow {
    std::size_t sweep_index = 0;
    std::optional<double> sweep_q;
    std::optional<double> sweep_d;
    std::optional<double> sweep_flip_rate;
    std::size_t records = 0;
    std::size_t trials = 0;
    RateEstimate resolved;
    RateEstimate tot;
    RateEstimate no_access;
    /// Over total attempts (all three components) per record.
    double mean_attempts = 0.0;
    double median_attempts = 0.0;
    double mean_time_ms = 0.0;
    /// Share of TOT records labelled strong; 0 without TOT records.
    double strong_tot_share = 0.0;
    /// Per slot, share of records whose slot matched.
    std::map<std::string, RateEstimate> partial_info;
    /// Phonological resolutions divided by phonological attempts.
    double phon_per_attempt_success = 0.0;
    /// Trials resolved in episode 1, and in a later episode.
    std::size_t resolved_immediate = 0;
    std::size_t resolved_later = 0;
};

inline constexpr const char* kIntervalMethod = "normal-approximation 95% (p +/- 1.96 sqrt(p(1-p)/n)), clipped to [0,1]";

/// One row per sweep point present in `records`, in sweep order. Throws
/// UsageError on empty input.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

}  // namespace totsim
