#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "totsim/assocnet.hpp"
#include "totsim/pattern.hpp"
#include "totsim/random.hpp"

namespace totsim {

enum class Component { Semantic = 0, Lexical = 1, Phonological = 2 };

inline constexpr std::array<Component, 3> kComponents{
    Component::Semantic, Component::Lexical, Component::Phonological};

std::string_view to_string(Component c);
std::optional<Component> parse_component(std::string_view name);

/// One value per word component, indexable by Component.
template <class T>
struct PerComponent {
    T semantic;
    T lexical;
    T phonological;

    T& operator[](Component c) {
        switch (c) {
            case Component::Semantic: return semantic;
            case Component::Lexical: return lexical;
            default: return phonological;
        }
    }
    const T& operator[](Component c) const {
        switch (c) {
            case Component::Semantic: return semantic;
            case Component::Lexical: return lexical;
            default: return phonological;
        }
    }

    bool operator==(const PerComponent&) const = default;
};

struct WordNode {
    std::string id;
    double frequency = 1.0;
    PerComponent<ComponentNetwork> networks;
    PerComponent<BipolarPattern> truth;
    /// The comparator's reference; equal to `truth` unless overridden.
    PerComponent<BipolarPattern> metamemory_ref;
    /// Slots over the phonological component.
    SlotMap slots;
};

struct Priming {
    double bonus = 0.0;
    std::size_t remaining = 0;
};

class Lexicon {
public:
    /// Throws ConfigError on duplicate ids or a threshold outside (0, 1].
    Lexicon(std::vector<WordNode> nodes, double selection_threshold);

    const std::vector<WordNode>& nodes() const noexcept { return nodes_; }
    std::vector<WordNode>& mutable_nodes() noexcept { return nodes_; }
    double selection_threshold() const noexcept { return selection_threshold_; }
    bool empty() const noexcept { return nodes_.empty(); }

    const WordNode* find(std::string_view id) const;
    std::optional<std::size_t> index_of(std::string_view id) const;

    /// Current selection bonus of a word (0 when not primed).
    double bonus(std::string_view id) const;
    const std::map<std::string, Priming, std::less<>>& priming() const noexcept { return priming_; }

    void set_priming(const std::string& id, Priming p);

    /// Counts one selection against every active priming entry; entries that
    /// reach zero are dropped.
    void advance_priming();

    std::size_t semantic_length() const;

private:
    std::vector<WordNode> nodes_;
    double selection_threshold_;
    std::map<std::string, Priming, std::less<>> priming_;
};

struct Selection {
    bool selected = false;
    /// Index into Lexicon::nodes(); meaningful only when `selected`.
    std::size_t node_index = 0;
    /// Winning score. When nothing is selected this is the best score seen.
    double completeness = 0.0;
};

/// Stage-1 word node selection.
///
/// score_i = min(1, max(0, overlap(input, semantic truth_i) / N) + bonus_i).
/// The maximal score wins with ties going to the lexicographically smallest
/// id; nothing is selected when every score is below the threshold.
/// Does not consume priming; see `select_and_advance`.
Selection select_node(const BipolarPattern& input, const Lexicon& lex);

/// select_node followed by lex.advance_priming().
Selection select_and_advance(const BipolarPattern& input, Lexicon& lex);

/// Copy of `lex` where `word_id` gains `bonus` for the next `decay_trials`
/// selections. Throws ConfigError on an unknown id, ParameterError on a bonus
/// outside [0, 1].
Lexicon prime(const Lexicon& lex, std::string_view word_id, double bonus,
              std::size_t decay_trials);

struct ExplicitWord {
    std::string id;
    double frequency = 1.0;
    PerComponent<std::string> patterns;
    /// Metamemory overrides per component, in '+'/'-' text form.
    std::map<Component, std::string> metamemory;

    bool operator==(const ExplicitWord&) const = default;
};

struct WordGenerator {
    std::size_t count = 0;
    /// Minimum pairwise Hamming distance, enforced within every component.
    std::size_t min_pairwise_distance = 0;
    /// Falls back to the stream passed to build_lexicon when absent.
    std::optional<std::uint64_t> seed;
    double frequency = 1.0;
    /// Candidate draws allowed per word and component before giving up.
    std::size_t retry_budget = 10000;

    bool operator==(const WordGenerator&) const = default;
};

struct LexiconSpec {
    PerComponent<std::size_t> lengths{9, 9, 9};
    double selection_threshold = 0.3;
    /// Phonological slots as name -> [begin, end).
    std::map<std::string, IndexRange> slots{{"first_letter", {0, 3}}};
    std::vector<ExplicitWord> words;
    std::optional<WordGenerator> generator;

    bool operator==(const LexiconSpec&) const = default;
};

/// Builds a lexicon of trained, undamaged nodes. Each component network
/// stores exactly that word's truth pattern. Generated words get ids
/// "w0", "w1", ...
///
/// Throws ConfigError for malformed explicit words and GenerationError when
/// the distance constraint cannot be met within the retry budget.
Lexicon build_lexicon(const LexiconSpec& spec, RandomStream& rng);

}  // namespace totsim
