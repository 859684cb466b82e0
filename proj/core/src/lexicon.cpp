#include "totsim/lexicon.hpp"

#include <algorithm>
#include <set>

#include "totsim/errors.hpp"

namespace totsim {

std::string_view to_string(Component c) {
    switch (c) {
        case Component::Semantic: return "semantic";
        case Component::Lexical: return "lexical";
        case Component::Phonological: return "phonological";
    }
    return "unknown";
}

std::optional<Component> parse_component(std::string_view name) {
    for (Component c : kComponents) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

Lexicon::Lexicon(std::vector<WordNode> nodes, double selection_threshold)
    : nodes_(std::move(nodes)), selection_threshold_(selection_threshold) {
    if (!(selection_threshold_ > 0.0 && selection_threshold_ <= 1.0)) {
        throw ConfigError("lexicon.selection_threshold", "must lie in (0, 1]");
    }
    std::set<std::string, std::less<>> seen;
    for (const auto& node : nodes_) {
        if (!seen.insert(node.id).second) {
            throw ConfigError("lexicon.words", "duplicate word id '" + node.id + "'");
        }
    }
}

const WordNode* Lexicon::find(std::string_view id) const {
    auto idx = index_of(id);
    return idx ? &nodes_[*idx] : nullptr;
}

std::optional<std::size_t> Lexicon::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id == id) return i;
    }
    return std::nullopt;
}

double Lexicon::bonus(std::string_view id) const {
    auto it = priming_.find(id);
    return it == priming_.end() ? 0.0 : it->second.bonus;
}

void Lexicon::set_priming(const std::string& id, Priming p) {
    if (p.remaining == 0) {
        priming_.erase(id);
    } else {
        priming_[id] = p;
    }
}

void Lexicon::advance_priming() {
    for (auto it = priming_.begin(); it != priming_.end();) {
        if (--it->second.remaining == 0) {
            it = priming_.erase(it);
        } else {
            ++it;
        }
    }
}

std::size_t Lexicon::semantic_length() const {
    return nodes_.empty() ? 0 : nodes_.front().truth.semantic.size();
}

Selection select_node(const BipolarPattern& input, const Lexicon& lex) {
    if (lex.empty()) throw ConfigError("lexicon", "cannot select from an empty lexicon");
    if (input.size() != lex.semantic_length()) {
        throw DimensionError("select_node: input length " + std::to_string(input.size()) +
                             " != semantic length " + std::to_string(lex.semantic_length()));
    }
    const double n = static_cast<double>(input.size());

    Selection best;
    bool have = false;
    const std::string* best_id = nullptr;
    const auto& nodes = lex.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double normalized = std::max(0.0, overlap(input, nodes[i].truth.semantic) / n);
        const double score = std::min(1.0, normalized + lex.bonus(nodes[i].id));
        if (!have || score > best.completeness ||
            (score == best.completeness && nodes[i].id < *best_id)) {
            best.node_index = i;
            best.completeness = score;
            best_id = &nodes[i].id;
            have = true;
        }
    }
    best.selected = best.completeness >= lex.selection_threshold();
    return best;
}

Selection select_and_advance(const BipolarPattern& input, Lexicon& lex) {
    Selection s = select_node(input, lex);
    lex.advance_priming();
    return s;
}

Lexicon prime(const Lexicon& lex, std::string_view word_id, double bonus,
              std::size_t decay_trials) {
    if (!lex.find(word_id)) {
        throw ConfigError("priming", "unknown word id '" + std::string(word_id) + "'");
    }
    if (!(bonus >= 0.0 && bonus <= 1.0)) throw ParameterError("prime: bonus outside [0, 1]");
    Lexicon out = lex;
    out.set_priming(std::string(word_id), Priming{bonus, decay_trials});
    return out;
}

namespace {

BipolarPattern parse_at(const std::string& text, std::size_t expected, const std::string& path) {
    BipolarPattern p = [&] {
        try {
            return BipolarPattern::parse(text);
        } catch (const Error& e) {
            throw ConfigError(path, e.what());
        }
    }();
    if (p.size() != expected) {
        throw ConfigError(path, "length " + std::to_string(p.size()) + " != declared length " +
                                    std::to_string(expected));
    }
    return p;
}

WordNode make_node(std::string id, double frequency, PerComponent<BipolarPattern> truth,
                   PerComponent<BipolarPattern> metamemory, const SlotMap& slots) {
    auto net = [](const BipolarPattern& p) { return train(std::span(&p, 1)); };
    return WordNode{
        .id = std::move(id),
        .frequency = frequency,
        .networks = {net(truth.semantic), net(truth.lexical), net(truth.phonological)},
        .truth = std::move(truth),
        .metamemory_ref = std::move(metamemory),
        .slots = slots,
    };
}

}  // namespace

Lexicon build_lexicon(const LexiconSpec& spec, RandomStream& rng) {
    for (Component c : kComponents) {
        if (spec.lengths[c] == 0) {
            throw ConfigError("lexicon.lengths." + std::string(to_string(c)), "must be >= 1");
        }
    }
    SlotMap slots;
    try {
        for (const auto& [name, range] : spec.slots) slots.add(name, range);
        slots.validate_for(spec.lengths.phonological);
    } catch (const Error& e) {
        throw ConfigError("lexicon.slots", e.what());
    }

    std::vector<WordNode> nodes;
    for (std::size_t w = 0; w < spec.words.size(); ++w) {
        const ExplicitWord& word = spec.words[w];
        const std::string base = "lexicon.words[" + std::to_string(w) + "]";
        if (word.id.empty()) throw ConfigError(base + ".id", "must not be empty");
        if (!(word.frequency >= 0.0)) throw ConfigError(base + ".frequency", "must be >= 0");
        auto truth_of = [&](Component c) {
            return parse_at(word.patterns[c], spec.lengths[c],
                            base + "." + std::string(to_string(c)));
        };
        PerComponent<BipolarPattern> truth{truth_of(Component::Semantic),
                                           truth_of(Component::Lexical),
                                           truth_of(Component::Phonological)};
        PerComponent<BipolarPattern> meta = truth;
        for (const auto& [c, text] : word.metamemory) {
            meta[c] = parse_at(text, spec.lengths[c],
                               base + ".metamemory." + std::string(to_string(c)));
        }
        nodes.push_back(make_node(word.id, word.frequency, std::move(truth), std::move(meta), slots));
    }

    if (spec.generator) {
        const WordGenerator& gen = *spec.generator;
        RandomStream seeded(gen.seed.value_or(0));
        RandomStream& stream = gen.seed ? seeded : rng;
        std::vector<PerComponent<BipolarPattern>> drawn;
        for (std::size_t k = 0; k < gen.count; ++k) {
            auto draw = [&](Component c) {
                for (std::size_t attempt = 0; attempt < gen.retry_budget; ++attempt) {
                    BipolarPattern candidate = random_pattern(spec.lengths[c], stream);
                    const bool ok = std::all_of(drawn.begin(), drawn.end(), [&](const auto& prev) {
                        return hamming(candidate, prev[c]) >= gen.min_pairwise_distance;
                    });
                    if (ok) return candidate;
                }
                throw GenerationError(
                    "could not draw word " + std::to_string(k) + " " + std::string(to_string(c)) +
                    " pattern with pairwise distance >= " +
                    std::to_string(gen.min_pairwise_distance) + " within " +
                    std::to_string(gen.retry_budget) + " attempts");
            };
            BipolarPattern sem = draw(Component::Semantic);
            BipolarPattern lex = draw(Component::Lexical);
            BipolarPattern phon = draw(Component::Phonological);
            drawn.push_back({std::move(sem), std::move(lex), std::move(phon)});
        }
        for (std::size_t k = 0; k < drawn.size(); ++k) {
            nodes.push_back(make_node("w" + std::to_string(k), gen.frequency, drawn[k], drawn[k], slots));
        }
    }

    return Lexicon(std::move(nodes), spec.selection_threshold);
}

}  // namespace totsim
