#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scenarios.hpp"
#include "totsim/errors.hpp"
#include "totsim/records_io.hpp"

namespace totsim {
namespace {

std::string to_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream os;
    write_records_csv(os, records);
    return os.str();
}

std::vector<TrialRecord> from_csv(const std::string& text) {
    std::istringstream is(text);
    return parse_records_csv(is);
}

TEST(Formatting, RealsAreShortestRoundTrip) {
    EXPECT_EQ(format_real(0.5), "0.5");
    EXPECT_EQ(format_real(1.0), "1");
    EXPECT_EQ(format_real(0.0), "0");
    EXPECT_EQ(std::stod(format_real(7.0 / 9.0)), 7.0 / 9.0);
    EXPECT_EQ(format_ms(23.0), "23.000");
    EXPECT_EQ(format_ms(chronometry(3, 1.0, 10.0)), "23.000");
    EXPECT_EQ(format_ms(0.0), "0.000");
}

TEST(RecordsCsv, HeaderIsFixed) {
    const auto text = to_csv({});
    EXPECT_EQ(text, std::string(kRecordsCsvHeader) + "\n");
}

TEST(RecordsCsv, WriteParseRoundTripsSweepRuns) {
    auto cfg = testing::partial_information_scenario(11);
    cfg.n_trials = 60;
    cfg.episodes_per_trial = 3;
    cfg.sweep = SweepAxes{{0.2, 0.6}, {0.5, 0.9}, {}};
    const auto records = run_trials(cfg);
    ASSERT_FALSE(records.empty());
    const auto text = to_csv(records);
    const auto parsed = from_csv(text);
    ASSERT_EQ(parsed.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& a = records[i];
        const auto& b = parsed[i];
        EXPECT_EQ(a.trial, b.trial);
        EXPECT_EQ(a.sweep_index, b.sweep_index) << i;
        EXPECT_EQ(a.sweep_q, b.sweep_q);
        EXPECT_EQ(a.sweep_d, b.sweep_d);
        EXPECT_EQ(a.episode, b.episode);
        EXPECT_EQ(a.classification, b.classification);
        EXPECT_EQ(a.sel_completeness, b.sel_completeness);
        EXPECT_EQ(a.attempts, b.attempts);
        EXPECT_EQ(a.resolved, b.resolved);
        EXPECT_EQ(a.tot_strength, b.tot_strength);
        EXPECT_EQ(a.partial_info.at("first_letter"), b.partial_info.at("first_letter"));
        EXPECT_EQ(a.seed_child, b.seed_child);
    }
    EXPECT_EQ(to_csv(parsed), text);
}

TEST(RecordsCsv, MalformedInputIsRejected) {
    EXPECT_THROW(from_csv("trial,foo\n"), UsageError);
    EXPECT_THROW(from_csv(std::string(kRecordsCsvHeader) + "\n1,2,3\n"), UsageError);
    EXPECT_THROW(from_csv(std::string(kRecordsCsvHeader) +
                          "\n0,,,1,Maybe,1,1,1,1,1,1,23.000,5\n"),
                 UsageError);
}

TEST(RecordsCsv, ChronometryColumnReadsExactly) {
    TrialRecord r;
    r.classification = Classification::Tot;
    r.attempts = {1, 1, 1};
    r.resolved = {true, true, false};
    r.total_time_ms = chronometry(3, 1.0, 10.0);
    r.partial_info["first_letter"] = true;
    const auto text = to_csv({r});
    EXPECT_NE(text.find(",23.000,"), std::string::npos) << text;
}

TEST(ValidateRecords, AcceptsRealRuns) {
    auto cfg = testing::partial_information_scenario(3);
    cfg.n_trials = 200;
    cfg.episodes_per_trial = 2;
    cfg.priming.push_back({"target", 0.2, 10});
    const auto records = run_trials(cfg);
    EXPECT_TRUE(validate_records(records, cfg.recall).empty());
    EXPECT_TRUE(validate_records(from_csv(to_csv(records)), cfg.recall).empty());
}

TEST(ValidateRecords, CatchesBrokenInvariants) {
    RecallParams params;
    TrialRecord good;
    good.classification = Classification::Resolved;
    good.sel_completeness = 1.0;
    good.attempts = {1, 1, 1};
    good.resolved = {true, true, true};
    good.tot_strength = 1.0;
    good.partial_info["first_letter"] = true;
    good.total_time_ms = 3.0 * chronometry(1, params.chronometry);
    ASSERT_TRUE(validate_records({good}, params).empty());

    auto bad = good;
    bad.classification = Classification::Tot;
    EXPECT_FALSE(validate_records({bad}, params).empty());

    bad = good;
    bad.total_time_ms = 23.0;
    EXPECT_FALSE(validate_records({bad}, params).empty());

    bad = good;
    bad.tot_strength = 0.5;
    EXPECT_FALSE(validate_records({bad}, params).empty());

    bad = good;
    bad.attempts.lexical = 0;
    EXPECT_FALSE(validate_records({bad}, params).empty());

    bad = good;
    bad.attempts.phonological = 65;
    EXPECT_FALSE(validate_records({bad}, params).empty());

    bad = good;
    bad.classification = Classification::NoAccess;
    bad.resolved = {false, false, false};
    bad.tot_strength = 0.3;
    EXPECT_FALSE(validate_records({bad}, params).empty());

    bad = good;
    bad.sel_completeness = 1.5;
    EXPECT_FALSE(validate_records({bad}, params).empty());
}

TEST(AtomicWrite, ReplacesWholeFile) {
    const auto dir = std::filesystem::temp_directory_path() / "totsim_atomic_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.csv";
    write_file_atomically(path, "first\n");
    write_file_atomically(path, "second\n");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "second\n");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
    EXPECT_EQ(files, 1U);
    std::filesystem::remove_all(dir);
}

TEST(SummaryJson, CarriesRates) {
    auto cfg = testing::nine_unit_scenario();
    cfg.recall.cue_fraction = {1.0, 1.0, 1.0};
    cfg.n_trials = 10;
    const auto rows = summarize(run_trials(cfg));
    const auto j = summary_to_json(rows);
    ASSERT_EQ(j.size(), 1U);
    EXPECT_EQ(j[0]["resolved"]["rate"], 1.0);
    std::ostringstream os;
    write_summary_csv(os, rows);
    EXPECT_NE(os.str().find('\n'), std::string::npos);
}

}  // namespace
}  // namespace totsim
