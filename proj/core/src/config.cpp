#include "totsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "totsim/errors.hpp"

namespace totsim {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

const char* type_name(const json& j) { return j.type_name(); }

double as_real(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, std::string("expected a number, got ") + type_name(j));
    return j.get<double>();
}

double as_unit(const json& j, const std::string& path) {
    const double x = as_real(j, path);
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(path, "must lie in [0, 1]");
    return x;
}

std::uint64_t as_u64(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) throw ConfigError(path, "must be non-negative");
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    throw ConfigError(path, std::string("expected a non-negative integer, got ") + type_name(j));
}

std::size_t as_count(const json& j, const std::string& path) {
    return static_cast<std::size_t>(as_u64(j, path));
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, std::string("expected a string, got ") + type_name(j));
    return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, std::string("expected a boolean, got ") + type_name(j));
    return j.get<bool>();
}

Component as_component(const json& j, const std::string& path) {
    const std::string name = as_string(j, path);
    auto c = parse_component(name);
    if (!c) {
        throw ConfigError(path, "unknown component '" + name +
                                    "' (expected semantic, lexical or phonological)");
    }
    return *c;
}

/// Walks one JSON object, remembering which keys were consumed so that
/// leftovers can be reported as unknown fields.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path, std::vector<std::string>* defaults)
        : j_(j), path_(std::move(path)), defaults_(defaults) {
        if (!j_.is_object()) {
            throw ConfigError(path_, std::string("expected an object, got ") + type_name(j_));
        }
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return nullptr;
        return &*it;
    }

    const json& require(const std::string& key) {
        const json* v = find(key);
        if (!v) throw ConfigError(join(path_, key), "is required");
        return *v;
    }

    template <class T, class Read>
    T get(const std::string& key, T fallback, Read read) {
        const json* v = find(key);
        if (!v) {
            note_default(key);
            return fallback;
        }
        return read(*v, join(path_, key));
    }

    void note_default(const std::string& key) const {
        if (defaults_) defaults_->push_back(join(path_, key));
    }

    std::string path(const std::string& key) const { return join(path_, key); }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key)) throw ConfigError(join(path_, key), "unknown field");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>* defaults_;
    std::set<std::string> seen_;
};

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, std::string("expected an array, got ") + type_name(j));
    return j;
}

/// Accepts either one value for all components or an object keyed by
/// component name (every component required).
template <class T, class Read>
PerComponent<T> per_component(const json& j, const std::string& path, Read read,
                              std::vector<std::string>* defaults) {
    if (!j.is_object()) {
        const T v = read(j, path);
        return {v, v, v};
    }
    ObjectReader r(j, path, defaults);
    PerComponent<T> out{read(r.require("semantic"), r.path("semantic")),
                        read(r.require("lexical"), r.path("lexical")),
                        read(r.require("phonological"), r.path("phonological"))};
    r.finish();
    return out;
}

ExplicitWord parse_word(const json& j, const std::string& path, std::vector<std::string>* defaults) {
    ObjectReader r(j, path, defaults);
    ExplicitWord w;
    w.id = as_string(r.require("id"), r.path("id"));
    w.frequency = r.get("frequency", 1.0, as_real);
    for (Component c : kComponents) {
        const std::string key(to_string(c));
        w.patterns[c] = as_string(r.require(key), r.path(key));
    }
    if (const json* m = r.find("metamemory")) {
        ObjectReader mr(*m, r.path("metamemory"), defaults);
        for (Component c : kComponents) {
            const std::string key(to_string(c));
            if (const json* v = mr.find(key)) w.metamemory[c] = as_string(*v, mr.path(key));
        }
        mr.finish();
    }
    r.finish();
    return w;
}

LexiconSpec parse_lexicon(const json& j, const std::string& path, std::vector<std::string>* defaults) {
    ObjectReader r(j, path, defaults);
    LexiconSpec spec;

    if (const json* words = r.find("words")) {
        const json& arr = as_array(*words, r.path("words"));
        for (std::size_t i = 0; i < arr.size(); ++i) {
            spec.words.push_back(parse_word(arr[i], index_path(r.path("words"), i), defaults));
        }
        if (spec.words.empty()) throw ConfigError(r.path("words"), "must not be empty");
    }
    if (const json* gen = r.find("generator")) {
        ObjectReader g(*gen, r.path("generator"), defaults);
        WordGenerator wg;
        wg.count = as_count(g.require("count"), g.path("count"));
        wg.min_pairwise_distance = g.get("min_pairwise_distance", std::size_t{0}, as_count);
        if (const json* s = g.find("seed")) wg.seed = as_u64(*s, g.path("seed"));
        wg.frequency = g.get("frequency", 1.0, as_real);
        wg.retry_budget = g.get("retry_budget", wg.retry_budget, as_count);
        if (wg.retry_budget < 1) throw ConfigError(g.path("retry_budget"), "must be >= 1");
        g.finish();
        spec.generator = wg;
    }

    if (const json* lengths = r.find("lengths")) {
        spec.lengths = per_component<std::size_t>(*lengths, r.path("lengths"), as_count, defaults);
    } else {
        r.note_default("lengths");
        if (!spec.words.empty()) {
            const ExplicitWord& w = spec.words.front();
            spec.lengths = {w.patterns.semantic.size(), w.patterns.lexical.size(),
                            w.patterns.phonological.size()};
        }
    }

    spec.selection_threshold = r.get("selection_threshold", spec.selection_threshold, as_real);

    if (const json* slots = r.find("slots")) {
        spec.slots.clear();
        if (!slots->is_object()) throw ConfigError(r.path("slots"), "expected an object");
        for (const auto& [name, value] : slots->items()) {
            const std::string p = r.path("slots") + "." + name;
            const json& range = as_array(value, p);
            if (range.size() != 2) throw ConfigError(p, "expected [begin, end]");
            spec.slots[name] = IndexRange{as_count(range[0], p + "[0]"), as_count(range[1], p + "[1]")};
        }
    } else {
        r.note_default("slots");
        spec.slots = {{"first_letter", {0, std::min<std::size_t>(3, spec.lengths.phonological)}}};
    }
    r.finish();
    return spec;
}

RecallParams parse_recall(const json& j, const std::string& path, std::vector<std::string>* defaults) {
    ObjectReader r(j, path, defaults);
    RecallParams p;
    if (const json* q = r.find("cue_fraction")) {
        p.cue_fraction = per_component<double>(*q, r.path("cue_fraction"), as_unit, defaults);
    } else {
        r.note_default("cue_fraction");
    }
    if (const json* m = r.find("max_attempts")) {
        p.max_attempts = per_component<std::size_t>(
            *m, r.path("max_attempts"),
            [](const json& v, const std::string& where) {
                const std::size_t n = as_count(v, where);
                if (n < 1) throw ConfigError(where, "must be >= 1");
                return n;
            },
            defaults);
    } else {
        r.note_default("max_attempts");
    }
    p.link_gain = r.get("link_gain", p.link_gain, as_unit);
    p.chronometry.spike_ms = r.get("spike_ms", p.chronometry.spike_ms, as_real);
    p.chronometry.interval_ms = r.get("interval_ms", p.chronometry.interval_ms, as_real);
    p.strong_threshold = r.get("strong_threshold", p.strong_threshold, as_real);
    p.fixed_cues = r.get("fixed_cues", p.fixed_cues, as_bool);
    r.finish();
    return p;
}

std::vector<double> parse_grid(const json& j, const std::string& path) {
    const json& arr = as_array(j, path);
    if (arr.empty()) throw ConfigError(path, "grid must not be empty");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_unit(arr[i], index_path(path, i)));
    return out;
}

}  // namespace

ScenarioConfig parse_config(const json& j, std::vector<std::string>* defaults_applied) {
    ObjectReader r(j, "", defaults_applied);
    ScenarioConfig cfg;
    cfg.seed = r.get("seed", std::uint64_t{0}, as_u64);
    cfg.label = r.get("label", std::string{}, as_string);
    cfg.lexicon = parse_lexicon(r.require("lexicon"), "lexicon", defaults_applied);

    if (const json* t = r.find("target")) {
        cfg.target = as_string(*t, "target");
    } else {
        r.note_default("target");
        cfg.target = cfg.lexicon.words.empty() ? "w0" : cfg.lexicon.words.front().id;
    }
    cfg.semantic_input_flip_rate = r.get("semantic_input_flip_rate", 0.0, as_unit);

    if (const json* rc = r.find("recall")) {
        cfg.recall = parse_recall(*rc, "recall", defaults_applied);
    } else {
        r.note_default("recall");
    }

    if (const json* dmg = r.find("damage")) {
        const json& arr = as_array(*dmg, "damage");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            ObjectReader e(arr[i], index_path("damage", i), defaults_applied);
            DamageEntry d;
            d.word = as_string(e.require("word"), e.path("word"));
            d.component = as_component(e.require("component"), e.path("component"));
            d.d = as_unit(e.require("d"), e.path("d"));
            if (const json* ps = e.find("protected_slots")) {
                const json& slots = as_array(*ps, e.path("protected_slots"));
                for (std::size_t k = 0; k < slots.size(); ++k) {
                    d.protected_slots.push_back(as_string(slots[k], index_path(e.path("protected_slots"), k)));
                }
            }
            e.finish();
            cfg.damage.push_back(std::move(d));
        }
    }

    if (const json* mc = r.find("metamemory_corruption")) {
        const json& arr = as_array(*mc, "metamemory_corruption");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            ObjectReader e(arr[i], index_path("metamemory_corruption", i), defaults_applied);
            CorruptionEntry c;
            c.word = as_string(e.require("word"), e.path("word"));
            c.component = as_component(e.require("component"), e.path("component"));
            c.flips = as_count(e.require("flips"), e.path("flips"));
            e.finish();
            cfg.metamemory_corruption.push_back(std::move(c));
        }
    }

    if (const json* pr = r.find("priming")) {
        const json& arr = as_array(*pr, "priming");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            ObjectReader e(arr[i], index_path("priming", i), defaults_applied);
            PrimingEntry p;
            p.word = as_string(e.require("word"), e.path("word"));
            p.bonus = as_unit(e.require("bonus"), e.path("bonus"));
            p.decay_trials = as_count(e.require("decay_trials"), e.path("decay_trials"));
            e.finish();
            cfg.priming.push_back(std::move(p));
        }
    }

    cfg.episodes_per_trial = r.get("episodes_per_trial", std::size_t{1}, as_count);
    cfg.n_trials = r.get("n_trials", std::size_t{1}, as_count);

    if (const json* sw = r.find("sweep")) {
        ObjectReader s(*sw, "sweep", defaults_applied);
        SweepAxes axes;
        if (const json* v = s.find("q")) axes.q = parse_grid(*v, "sweep.q");
        if (const json* v = s.find("d")) axes.d = parse_grid(*v, "sweep.d");
        if (const json* v = s.find("flip_rate")) axes.flip_rate = parse_grid(*v, "sweep.flip_rate");
        s.finish();
        cfg.sweep = std::move(axes);
    }
    r.finish();

    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           std::vector<std::string>* defaults_applied) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j, defaults_applied);
}

json to_json(const ScenarioConfig& cfg) {
    auto per = [](const auto& pc) {
        return json{{"semantic", pc.semantic}, {"lexical", pc.lexical}, {"phonological", pc.phonological}};
    };

    json lexicon{{"lengths", per(cfg.lexicon.lengths)},
                 {"selection_threshold", cfg.lexicon.selection_threshold}};
    json slots = json::object();
    for (const auto& [name, range] : cfg.lexicon.slots) slots[name] = {range.begin, range.end};
    lexicon["slots"] = slots;
    if (!cfg.lexicon.words.empty()) {
        json words = json::array();
        for (const auto& w : cfg.lexicon.words) {
            json jw{{"id", w.id},
                    {"frequency", w.frequency},
                    {"semantic", w.patterns.semantic},
                    {"lexical", w.patterns.lexical},
                    {"phonological", w.patterns.phonological}};
            if (!w.metamemory.empty()) {
                json m = json::object();
                for (const auto& [c, text] : w.metamemory) m[std::string(to_string(c))] = text;
                jw["metamemory"] = m;
            }
            words.push_back(std::move(jw));
        }
        lexicon["words"] = std::move(words);
    }
    if (cfg.lexicon.generator) {
        const auto& g = *cfg.lexicon.generator;
        json jg{{"count", g.count},
                {"min_pairwise_distance", g.min_pairwise_distance},
                {"frequency", g.frequency},
                {"retry_budget", g.retry_budget}};
        if (g.seed) jg["seed"] = *g.seed;
        lexicon["generator"] = std::move(jg);
    }

    const RecallParams& rp = cfg.recall;
    json recall{{"cue_fraction", per(rp.cue_fraction)},
                {"max_attempts", per(rp.max_attempts)},
                {"link_gain", rp.link_gain},
                {"spike_ms", rp.chronometry.spike_ms},
                {"interval_ms", rp.chronometry.interval_ms},
                {"strong_threshold", rp.strong_threshold},
                {"fixed_cues", rp.fixed_cues}};

    json damage = json::array();
    for (const auto& d : cfg.damage) {
        damage.push_back({{"word", d.word},
                          {"component", std::string(to_string(d.component))},
                          {"d", d.d},
                          {"protected_slots", d.protected_slots}});
    }
    json corruption = json::array();
    for (const auto& c : cfg.metamemory_corruption) {
        corruption.push_back(
            {{"word", c.word}, {"component", std::string(to_string(c.component))}, {"flips", c.flips}});
    }
    json priming = json::array();
    for (const auto& p : cfg.priming) {
        priming.push_back({{"word", p.word}, {"bonus", p.bonus}, {"decay_trials", p.decay_trials}});
    }

    json out{{"seed", cfg.seed},
             {"label", cfg.label},
             {"lexicon", std::move(lexicon)},
             {"target", cfg.target},
             {"semantic_input_flip_rate", cfg.semantic_input_flip_rate},
             {"recall", std::move(recall)},
             {"damage", std::move(damage)},
             {"metamemory_corruption", std::move(corruption)},
             {"priming", std::move(priming)},
             {"episodes_per_trial", cfg.episodes_per_trial},
             {"n_trials", cfg.n_trials}};
    if (cfg.sweep) {
        json sweep = json::object();
        if (!cfg.sweep->q.empty()) sweep["q"] = cfg.sweep->q;
        if (!cfg.sweep->d.empty()) sweep["d"] = cfg.sweep->d;
        if (!cfg.sweep->flip_rate.empty()) sweep["flip_rate"] = cfg.sweep->flip_rate;
        out["sweep"] = std::move(sweep);
    }
    return out;
}

}  // namespace totsim
