#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "scenarios.hpp"
#include "totsim/config.hpp"
#include "totsim/errors.hpp"

namespace totsim {
namespace {

using nlohmann::json;

const std::filesystem::path kData = TOTSIM_TEST_DATA_DIR;

std::string config_error_path(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

json minimal() {
    return json::parse(R"({"lexicon": {"words": [{"id": "a", "semantic": "+-+", "lexical": "+--", "phonological": "++-"}]}})");
}

TEST(ParseConfig, MinimalGetsDefaults) {
    std::vector<std::string> defaults;
    auto cfg = parse_config(minimal(), &defaults);
    EXPECT_EQ(cfg.seed, 0U);
    EXPECT_EQ(cfg.target, "a");
    EXPECT_EQ(cfg.lexicon.lengths, (PerComponent<std::size_t>{3, 3, 3}));
    EXPECT_EQ(cfg.recall, RecallParams{});
    EXPECT_EQ(cfg.n_trials, 1U);
    EXPECT_EQ(cfg.lexicon.slots.at("first_letter"), (IndexRange{0, 3}));
    for (const char* path : {"seed", "target", "recall", "n_trials", "lexicon.lengths", "lexicon.slots"}) {
        EXPECT_NE(std::find(defaults.begin(), defaults.end(), path), defaults.end()) << path;
    }
}

TEST(ParseConfig, OutOfRangeCueNamesField) {
    auto j = minimal();
    j["recall"] = {{"cue_fraction", 1.5}};
    EXPECT_EQ(config_error_path(j), "recall.cue_fraction");
    j["recall"] = {{"cue_fraction", {{"semantic", 0}, {"lexical", 0}, {"phonological", 1.5}}}};
    EXPECT_EQ(config_error_path(j), "recall.cue_fraction.phonological");
}

TEST(ParseConfig, UnknownFieldsAreRejectedAtAnyDepth) {
    auto j = minimal();
    j["extra"] = 1;
    EXPECT_EQ(config_error_path(j), "extra");
    j = minimal();
    j["lexicon"]["words"][0]["gender"] = "+";
    EXPECT_EQ(config_error_path(j), "lexicon.words[0].gender");
}

TEST(ParseConfig, BadPatternCharacters) {
    auto j = minimal();
    j["lexicon"]["words"][0]["semantic"] = "+*+";
    EXPECT_EQ(config_error_path(j), "lexicon.words[0].semantic");
}

TEST(ParseConfig, CrossReferenceErrors) {
    auto j = minimal();
    j["target"] = "zzz";
    EXPECT_EQ(config_error_path(j), "target");

    j = minimal();
    j["damage"] = json::array({{{"word", "a"}, {"component", "semantic"}, {"d", 0.5},
                                {"protected_slots", {"first_letter"}}}});
    EXPECT_EQ(config_error_path(j), "damage[0].protected_slots");

    j = minimal();
    j["damage"] = json::array({{{"word", "a"}, {"component", "motor"}, {"d", 0.5}}});
    EXPECT_EQ(config_error_path(j), "damage[0].component");

    j = minimal();
    j["sweep"] = {{"d", {0.1}}};
    EXPECT_EQ(config_error_path(j), "sweep.d");

    j = minimal();
    j["sweep"] = {{"q", json::array()}};
    EXPECT_EQ(config_error_path(j), "sweep.q");

    j = minimal();
    j["lexicon"]["generator"] = {{"count", 2}};
    EXPECT_EQ(config_error_path(j), "lexicon");

    j = minimal();
    j["n_trials"] = -3;
    EXPECT_EQ(config_error_path(j), "n_trials");

    j = minimal();
    j["recall"] = {{"max_attempts", 0}};
    EXPECT_EQ(config_error_path(j), "recall.max_attempts");
}

TEST(ParseConfig, GeneratorTargetsResolve) {
    auto j = json::parse(R"({"lexicon": {"lengths": 11, "generator": {"count": 3, "seed": 1}}, "target": "w2"})");
    auto cfg = parse_config(j);
    EXPECT_EQ(cfg.lexicon.generator->count, 3U);
    j["target"] = "w3";
    EXPECT_EQ(config_error_path(j), "target");
}

TEST(ToJson, RoundTripsAfterDefaultResolution) {
    for (const char* file : {"minimal.json", "free_recall_n9.json", "scenario_tot.json"}) {
        auto cfg = load_config(kData / file);
        auto again = parse_config(to_json(cfg));
        EXPECT_EQ(again, cfg) << file;
        EXPECT_EQ(to_json(again), to_json(cfg)) << file;
    }
}

TEST(ToJson, RoundTripsProgrammaticConfigs) {
    RandomStream rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        auto cfg = testing::partial_information_scenario(rng.next_u64());
        cfg.recall.link_gain = rng.uniform01();
        cfg.recall.cue_fraction.lexical = rng.uniform01();
        cfg.semantic_input_flip_rate = rng.uniform01();
        cfg.recall.fixed_cues = rng.uniform_index(2) == 1;
        cfg.priming.push_back({"target", rng.uniform01(), rng.uniform_index(10)});
        cfg.sweep = SweepAxes{{rng.uniform01()}, {0.1, rng.uniform01()}, {}};
        EXPECT_EQ(parse_config(to_json(cfg)), cfg);
    }
}

TEST(LoadConfig, MissingFileAndBadJson) {
    EXPECT_THROW(load_config(kData / "does_not_exist.json"), ConfigError);
    auto tmp = std::filesystem::temp_directory_path() / "totsim_bad.json";
    {
        std::ofstream(tmp) << "{ not json";
    }
    EXPECT_THROW(load_config(tmp), ConfigError);
    std::filesystem::remove(tmp);
}

}  // namespace
}  // namespace totsim
