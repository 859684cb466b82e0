#include "totsim/exper.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "totsim/errors.hpp"

namespace totsim {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

void require_unit(double x, const std::string& path) {
    if (!in_unit_interval(x)) throw ConfigError(path, "must lie in [0, 1]");
}

std::set<std::string> declared_word_ids(const LexiconSpec& spec) {
    std::set<std::string> ids;
    for (const auto& w : spec.words) ids.insert(w.id);
    if (spec.generator) {
        for (std::size_t k = 0; k < spec.generator->count; ++k) ids.insert("w" + std::to_string(k));
    }
    return ids;
}

void require_word(const std::set<std::string>& ids, const std::string& id, const std::string& path) {
    if (!ids.contains(id)) throw ConfigError(path, "unknown word id '" + id + "'");
}

}  // namespace

void ScenarioConfig::validate() const {
    if (n_trials < 1) throw ConfigError("n_trials", "must be >= 1");
    if (episodes_per_trial < 1) throw ConfigError("episodes_per_trial", "must be >= 1");
    require_unit(semantic_input_flip_rate, "semantic_input_flip_rate");

    for (Component c : kComponents) {
        const std::string name(to_string(c));
        require_unit(recall.cue_fraction[c], "recall.cue_fraction." + name);
        if (recall.max_attempts[c] < 1) {
            throw ConfigError("recall.max_attempts." + name, "must be >= 1");
        }
        if (lexicon.lengths[c] < 1) throw ConfigError("lexicon.lengths." + name, "must be >= 1");
    }
    require_unit(recall.link_gain, "recall.link_gain");
    if (!(recall.chronometry.spike_ms > 0.0)) throw ConfigError("recall.spike_ms", "must be > 0");
    if (!(recall.chronometry.interval_ms >= 0.0)) {
        throw ConfigError("recall.interval_ms", "must be >= 0");
    }
    if (!(recall.strong_threshold > 0.0 && recall.strong_threshold < 1.0)) {
        throw ConfigError("recall.strong_threshold", "must lie in (0, 1)");
    }

    if (!(lexicon.selection_threshold > 0.0 && lexicon.selection_threshold <= 1.0)) {
        throw ConfigError("lexicon.selection_threshold", "must lie in (0, 1]");
    }
    if (lexicon.words.empty() == !lexicon.generator.has_value()) {
        throw ConfigError("lexicon", "exactly one of 'words' and 'generator' must be given");
    }
    if (lexicon.generator && lexicon.generator->count < 1) {
        throw ConfigError("lexicon.generator.count", "must be >= 1");
    }
    {
        SlotMap slots;
        for (const auto& [name, range] : lexicon.slots) {
            const std::string path = "lexicon.slots." + name;
            try {
                slots.add(name, range);
            } catch (const Error& e) {
                throw ConfigError(path, e.what());
            }
            if (range.end > lexicon.lengths.phonological) {
                throw ConfigError(path, "reaches past the phonological length");
            }
        }
    }

    for (std::size_t w = 0; w < lexicon.words.size(); ++w) {
        const ExplicitWord& word = lexicon.words[w];
        const std::string base = "lexicon.words[" + std::to_string(w) + "]";
        auto check = [&](const std::string& text, Component c, const std::string& path) {
            try {
                if (BipolarPattern::parse(text).size() != lexicon.lengths[c]) {
                    throw ConfigError(path, "length " + std::to_string(text.size()) +
                                                " != declared length " +
                                                std::to_string(lexicon.lengths[c]));
                }
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                throw ConfigError(path, e.what());
            }
        };
        if (word.id.empty()) throw ConfigError(base + ".id", "must not be empty");
        for (Component c : kComponents) {
            check(word.patterns[c], c, base + "." + std::string(to_string(c)));
        }
        for (const auto& [c, text] : word.metamemory) {
            check(text, c, base + ".metamemory." + std::string(to_string(c)));
        }
    }

    const auto ids = declared_word_ids(lexicon);
    if (ids.size() != lexicon.words.size() + (lexicon.generator ? lexicon.generator->count : 0)) {
        throw ConfigError("lexicon.words", "word ids must be unique");
    }
    if (target.empty()) throw ConfigError("target", "must name a word");
    require_word(ids, target, "target");

    for (std::size_t i = 0; i < damage.size(); ++i) {
        const std::string base = "damage[" + std::to_string(i) + "]";
        require_word(ids, damage[i].word, base + ".word");
        require_unit(damage[i].d, base + ".d");
        if (!damage[i].protected_slots.empty() && damage[i].component != Component::Phonological) {
            throw ConfigError(base + ".protected_slots",
                              "slots exist on the phonological component only");
        }
        for (const auto& slot : damage[i].protected_slots) {
            if (!lexicon.slots.contains(slot)) {
                throw ConfigError(base + ".protected_slots", "unknown slot '" + slot + "'");
            }
        }
    }
    for (std::size_t i = 0; i < metamemory_corruption.size(); ++i) {
        const auto& e = metamemory_corruption[i];
        const std::string base = "metamemory_corruption[" + std::to_string(i) + "]";
        require_word(ids, e.word, base + ".word");
        if (e.flips > lexicon.lengths[e.component]) {
            throw ConfigError(base + ".flips", "exceeds the component length");
        }
    }
    for (std::size_t i = 0; i < priming.size(); ++i) {
        const std::string base = "priming[" + std::to_string(i) + "]";
        require_word(ids, priming[i].word, base + ".word");
        require_unit(priming[i].bonus, base + ".bonus");
    }

    if (sweep) {
        if (sweep->q.empty() && sweep->d.empty() && sweep->flip_rate.empty()) {
            throw ConfigError("sweep", "declares no grid");
        }
        auto check_axis = [](const std::vector<double>& axis, const std::string& name) {
            for (std::size_t i = 0; i < axis.size(); ++i) {
                require_unit(axis[i], "sweep." + name + "[" + std::to_string(i) + "]");
            }
        };
        check_axis(sweep->q, "q");
        check_axis(sweep->d, "d");
        check_axis(sweep->flip_rate, "flip_rate");
        if (!sweep->d.empty() && damage.empty()) {
            throw ConfigError("sweep.d", "needs at least one damage entry to apply to");
        }
    }
}

std::vector<SweepPoint> sweep_points(const ScenarioConfig& cfg) {
    if (!cfg.sweep) return {SweepPoint{}};
    auto axis = [](const std::vector<double>& values) {
        std::vector<std::optional<double>> out(values.begin(), values.end());
        if (out.empty()) out.push_back(std::nullopt);
        return out;
    };
    std::vector<SweepPoint> points;
    for (auto q : axis(cfg.sweep->q)) {
        for (auto d : axis(cfg.sweep->d)) {
            for (auto f : axis(cfg.sweep->flip_rate)) {
                points.push_back(SweepPoint{points.size(), q, d, f});
            }
        }
    }
    return points;
}

Lexicon build_scenario_lexicon(const ScenarioConfig& cfg) {
    RandomStream stream = RandomStream(cfg.seed).child(kLexiconStreamKey);
    return build_lexicon(cfg.lexicon, stream);
}

namespace {

struct DamageTarget {
    std::size_t node;
    Component component;
    double d;
    std::vector<std::size_t> protected_units;
};

struct CorruptionTarget {
    std::size_t node;
    Component component;
    std::size_t flips;
};

struct PointPlan {
    SweepPoint point;
    RecallParams params;
    double flip_rate;
    std::vector<DamageTarget> damage;
};

std::vector<TrialRecord> run_one_trial(const ScenarioConfig& cfg, const Lexicon& base,
                                       const PointPlan& plan,
                                       const std::vector<CorruptionTarget>& corruption,
                                       std::size_t target, std::size_t trial) {
    const RandomStream master(cfg.seed);
    RandomStream rng = master.child(trial);

    const bool personalised =
        !plan.damage.empty() || !corruption.empty() || !cfg.priming.empty();
    std::optional<Lexicon> own;
    if (personalised) {
        own.emplace(base);
        auto& nodes = own->mutable_nodes();
        for (const auto& dt : plan.damage) {
            auto& net = nodes[dt.node].networks[dt.component];
            net = damage(net, dt.d, rng, dt.protected_units);
        }
        for (const auto& ct : corruption) {
            auto& ref = nodes[ct.node].metamemory_ref[ct.component];
            const auto flips = rng.sample(ref.size(), ct.flips);
            ref = ref.with_flipped(flips);
        }
        for (const auto& p : cfg.priming) {
            if (trial < p.decay_trials) own->set_priming(p.word, Priming{p.bonus, p.decay_trials - trial});
        }
    }
    const Lexicon& lex = own ? *own : base;

    const BipolarPattern& truth = lex.nodes()[target].truth.semantic;
    const auto flips = rng.sample(truth.size(), fraction_count(plan.flip_rate, truth.size()));
    const BipolarPattern input = truth.with_flipped(flips);

    std::vector<TrialRecord> records;
    for (std::size_t episode = 1; episode <= cfg.episodes_per_trial; ++episode) {
        const RecallOutcome outcome = recall_word(lex, input, plan.params, rng);
        TrialRecord r;
        r.trial = trial;
        r.sweep_index = plan.point.index;
        r.sweep_q = plan.point.q;
        r.sweep_d = plan.point.d;
        r.sweep_flip_rate = plan.point.flip_rate;
        r.episode = episode;
        r.classification = outcome.classification;
        r.selected_word = outcome.word_id;
        r.sel_completeness = outcome.selection.completeness;
        for (Component c : kComponents) {
            r.attempts[c] = outcome.components[c].attempts;
            r.resolved[c] = outcome.components[c].resolved;
        }
        r.tot_strength = outcome.tot_strength;
        r.strong = is_strong(outcome, plan.params.strong_threshold);
        r.partial_info = outcome.partial_info;
        r.total_time_ms = outcome.total_time_ms;
        r.seed_child = master.child_seed(trial);
        records.push_back(std::move(r));
        if (outcome.classification == Classification::Resolved) break;
    }
    return records;
}

}  // namespace

std::vector<TrialRecord> run_trials(const ScenarioConfig& cfg, std::size_t workers) {
    cfg.validate();
    const Lexicon lexicon = build_scenario_lexicon(cfg);
    const std::size_t target = *lexicon.index_of(cfg.target);

    std::vector<CorruptionTarget> corruption;
    for (const auto& e : cfg.metamemory_corruption) {
        corruption.push_back({*lexicon.index_of(e.word), e.component, e.flips});
    }

    std::vector<PointPlan> plans;
    for (const SweepPoint& point : sweep_points(cfg)) {
        PointPlan plan{point, cfg.recall, point.flip_rate.value_or(cfg.semantic_input_flip_rate), {}};
        if (point.q) {
            for (Component c : kComponents) plan.params.cue_fraction[c] = *point.q;
        }
        for (const auto& e : cfg.damage) {
            const std::size_t node = *lexicon.index_of(e.word);
            std::vector<std::size_t> prot;
            if (e.component == Component::Phonological) {
                prot = lexicon.nodes()[node].slots.indices_of(e.protected_slots);
            }
            plan.damage.push_back({node, e.component, point.d.value_or(e.d), std::move(prot)});
        }
        plans.push_back(std::move(plan));
    }

    const std::size_t jobs = plans.size() * cfg.n_trials;
    std::vector<std::vector<TrialRecord>> results(jobs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            try {
                const PointPlan& plan = plans[job / cfg.n_trials];
                results[job] = run_one_trial(cfg, lexicon, plan, corruption, target,
                                             job % cfg.n_trials);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = jobs;
            }
        }
    };

    const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(jobs, 1));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<TrialRecord> records;
    for (auto& r : results) {
        std::move(r.begin(), r.end(), std::back_inserter(records));
    }
    return records;
}

Rational Rational::reduced(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw ParameterError("rational with zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

__extension__ typedef unsigned __int128 Wide;

bool Rational::operator<(const Rational& other) const {
    return static_cast<Wide>(num) * other.den < static_cast<Wide>(other.num) * den;
}

Rational exact_success_prob(const ComponentNetwork& net, const BipolarPattern& metamemory_ref,
                            std::span<const std::size_t> cue_indices) {
    const std::size_t n = net.size();
    if (metamemory_ref.size() != n) throw DimensionError("exact_success_prob: length mismatch");

    std::vector<std::uint8_t> cued(n, 0);
    for (std::size_t i : cue_indices) {
        if (i >= n) throw DimensionError("exact_success_prob: cue index out of range");
        cued[i] = 1;
    }
    std::vector<std::size_t> free_units;
    for (std::size_t i = 0; i < n; ++i) {
        if (!cued[i]) free_units.push_back(i);
    }
    if (free_units.size() > kMaxEnumeratedFreeUnits) {
        throw CapacityError("exact_success_prob: " + std::to_string(free_units.size()) +
                            " free units exceed the limit of " +
                            std::to_string(kMaxEnumeratedFreeUnits));
    }

    // Start from all free units at -1 and walk the reflected Gray code, so each
    // step flips one input and updates every activation in O(n).
    std::vector<int> input(n);
    for (std::size_t j = 0; j < n; ++j) input[j] = cued[j] ? metamemory_ref[j] : -1;

    std::vector<std::int64_t> act(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!net.is_masked(j)) act[i] += static_cast<std::int64_t>(net.hebbian_sum(i, j)) * input[j];
        }
    }

    // Masked outputs are pinned to +1; if the reference wants -1 there, nothing matches.
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < n; ++i) {
        if (net.is_masked(i)) {
            if (metamemory_ref[i] != 1) return Rational{0, 1};
        } else {
            live.push_back(i);
        }
    }

    auto matches = [&] {
        for (std::size_t i : live) {
            if ((act[i] >= 0 ? 1 : -1) != metamemory_ref[i]) return false;
        }
        return true;
    };

    const std::uint64_t total = std::uint64_t{1} << free_units.size();
    std::uint64_t count = matches() ? 1 : 0;
    for (std::uint64_t step = 1; step < total; ++step) {
        const std::size_t j = free_units[static_cast<std::size_t>(std::countr_zero(step))];
        const int delta = -2 * input[j];
        input[j] = -input[j];
        if (!net.is_masked(j)) {
            for (std::size_t i : live) act[i] += static_cast<std::int64_t>(net.hebbian_sum(i, j)) * delta;
        }
        if (matches()) ++count;
    }
    return Rational::reduced(count, total);
}

namespace {

RateEstimate estimate(std::size_t hits, std::size_t n) {
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double half = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return {p, std::max(0.0, p - half), std::min(1.0, p + half)};
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw UsageError("summarize: no records");

    std::map<std::size_t, std::vector<const TrialRecord*>> groups;
    for (const auto& r : records) groups[r.sweep_index].push_back(&r);

    std::vector<SummaryRow> rows;
    for (const auto& [index, group] : groups) {
        SummaryRow row;
        row.sweep_index = index;
        row.sweep_q = group.front()->sweep_q;
        row.sweep_d = group.front()->sweep_d;
        row.sweep_flip_rate = group.front()->sweep_flip_rate;
        row.records = group.size();

        std::set<std::size_t> trials;
        std::size_t resolved = 0, tot = 0, no_access = 0, strong = 0;
        std::size_t phon_resolved = 0, phon_attempts = 0;
        std::map<std::string, std::size_t> slot_hits;
        std::vector<double> attempts;
        double time_sum = 0.0;
        for (const TrialRecord* r : group) {
            trials.insert(r->trial);
            switch (r->classification) {
                case Classification::Resolved:
                    ++resolved;
                    (r->episode == 1 ? row.resolved_immediate : row.resolved_later)++;
                    break;
                case Classification::Tot:
                    ++tot;
                    if (r->strong) ++strong;
                    break;
                case Classification::NoAccess: ++no_access; break;
            }
            attempts.push_back(static_cast<double>(r->attempts.semantic + r->attempts.lexical +
                                                   r->attempts.phonological));
            time_sum += r->total_time_ms;
            phon_attempts += r->attempts.phonological;
            if (r->resolved.phonological) ++phon_resolved;
            for (const auto& [slot, hit] : r->partial_info) slot_hits[slot] += hit ? 1 : 0;
        }
        const std::size_t n = group.size();
        row.trials = trials.size();
        row.resolved = estimate(resolved, n);
        row.tot = estimate(tot, n);
        row.no_access = estimate(no_access, n);
        row.mean_attempts = std::accumulate(attempts.begin(), attempts.end(), 0.0) / static_cast<double>(n);
        std::sort(attempts.begin(), attempts.end());
        row.median_attempts = n % 2 ? attempts[n / 2] : 0.5 * (attempts[n / 2 - 1] + attempts[n / 2]);
        row.mean_time_ms = time_sum / static_cast<double>(n);
        row.strong_tot_share = tot ? static_cast<double>(strong) / static_cast<double>(tot) : 0.0;
        for (const auto& [slot, hits] : slot_hits) row.partial_info[slot] = estimate(hits, n);
        row.phon_per_attempt_success =
            phon_attempts ? static_cast<double>(phon_resolved) / static_cast<double>(phon_attempts) : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace totsim
