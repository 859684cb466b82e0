#include "totsim/records_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>

#include "totsim/errors.hpp"

namespace totsim {

std::string format_real(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw Error("format_real: conversion failed");
    return std::string(buf, end);
}

std::string format_ms(double ms) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, ms, std::chars_format::fixed, 3);
    if (ec != std::errc{}) throw Error("format_ms: conversion failed");
    return std::string(buf, end);
}

namespace {

constexpr std::string_view kFirstLetter = "first_letter";

std::string optional_real(const std::optional<double>& x) { return x ? format_real(*x) : ""; }

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

template <class T>
T parse_number(const std::string& s, std::size_t line, std::string_view column) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw UsageError("records CSV line " + std::to_string(line) + ": bad " +
                         std::string(column) + " '" + s + "'");
    }
    return value;
}

std::optional<double> parse_optional(const std::string& s, std::size_t line, std::string_view column) {
    if (s.empty()) return std::nullopt;
    return parse_number<double>(s, line, column);
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << kRecordsCsvHeader << '\n';
    for (const auto& r : records) {
        auto slot = r.partial_info.find(std::string(kFirstLetter));
        out << r.trial << ',' << optional_real(r.sweep_q) << ',' << optional_real(r.sweep_d) << ','
            << r.episode << ',' << to_string(r.classification) << ','
            << format_real(r.sel_completeness) << ',' << r.attempts.semantic << ','
            << r.attempts.lexical << ',' << r.attempts.phonological << ','
            << format_real(r.tot_strength) << ','
            << (slot == r.partial_info.end() ? "" : (slot->second ? "1" : "0")) << ','
            << format_ms(r.total_time_ms) << ',' << r.seed_child << '\n';
    }
}

std::vector<TrialRecord> parse_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRecordsCsvHeader) {
        throw UsageError("records CSV: header does not match schema version " +
                         std::to_string(kRecordsSchemaVersion));
    }
    std::vector<TrialRecord> records;
    // Records arrive ordered by (sweep point, trial, episode); a new point
    // starts whenever that order restarts or the visible coordinates change.
    std::size_t point = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 13) {
            throw UsageError("records CSV line " + std::to_string(line_no) + ": expected 13 cells, got " +
                             std::to_string(cells.size()));
        }
        TrialRecord r;
        r.trial = parse_number<std::size_t>(cells[0], line_no, "trial");
        r.sweep_q = parse_optional(cells[1], line_no, "sweep_q");
        r.sweep_d = parse_optional(cells[2], line_no, "sweep_d");
        r.episode = parse_number<std::size_t>(cells[3], line_no, "episode");
        const TrialRecord* previous = records.empty() ? nullptr : &records.back();
        if (previous &&
            (previous->sweep_q != r.sweep_q || previous->sweep_d != r.sweep_d ||
             r.trial < previous->trial ||
             (r.trial == previous->trial && r.episode <= previous->episode))) {
            ++point;
        }
        r.sweep_index = point;
        auto cls = parse_classification(cells[4]);
        if (!cls) throw UsageError("records CSV line " + std::to_string(line_no) + ": bad classification");
        r.classification = *cls;
        r.sel_completeness = parse_number<double>(cells[5], line_no, "sel_completeness");
        r.attempts.semantic = parse_number<std::size_t>(cells[6], line_no, "att_sem");
        r.attempts.lexical = parse_number<std::size_t>(cells[7], line_no, "att_lex");
        r.attempts.phonological = parse_number<std::size_t>(cells[8], line_no, "att_phon");
        r.tot_strength = parse_number<double>(cells[9], line_no, "tot_strength");
        if (!cells[10].empty()) {
            if (cells[10] != "0" && cells[10] != "1") {
                throw UsageError("records CSV line " + std::to_string(line_no) + ": bad slot_first_letter");
            }
            r.partial_info[std::string(kFirstLetter)] = cells[10] == "1";
        }
        r.total_time_ms = parse_number<double>(cells[11], line_no, "total_time_ms");
        r.seed_child = parse_number<std::uint64_t>(cells[12], line_no, "seed_child");

        // Components run only after the previous one resolved, so the
        // resolution flags follow from the classification and attempt counts.
        switch (r.classification) {
            case Classification::Resolved: r.resolved = {true, true, true}; break;
            case Classification::Tot:
                r.resolved = {r.attempts.lexical > 0, r.attempts.phonological > 0, false};
                break;
            case Classification::NoAccess: r.resolved = {false, false, false}; break;
        }
        records.push_back(std::move(r));
    }
    return records;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    std::set<std::string> slots;
    for (const auto& row : rows) {
        for (const auto& [name, est] : row.partial_info) slots.insert(name);
    }
    out << "sweep_index,sweep_q,sweep_d,sweep_flip_rate,records,trials,"
           "resolved_rate,resolved_lo,resolved_hi,tot_rate,tot_lo,tot_hi,"
           "noaccess_rate,noaccess_lo,noaccess_hi,mean_attempts,median_attempts,mean_time_ms,"
           "strong_tot_share,phon_per_attempt_success,resolved_immediate,resolved_later";
    for (const auto& s : slots) out << ",slot_" << s << "_rate,slot_" << s << "_lo,slot_" << s << "_hi";
    out << '\n';
    auto est = [&](const RateEstimate& e) {
        out << ',' << format_real(e.rate) << ',' << format_real(e.lo) << ',' << format_real(e.hi);
    };
    for (const auto& row : rows) {
        out << row.sweep_index << ',' << optional_real(row.sweep_q) << ',' << optional_real(row.sweep_d)
            << ',' << optional_real(row.sweep_flip_rate) << ',' << row.records << ',' << row.trials;
        est(row.resolved);
        est(row.tot);
        est(row.no_access);
        out << ',' << format_real(row.mean_attempts) << ',' << format_real(row.median_attempts) << ','
            << format_ms(row.mean_time_ms) << ',' << format_real(row.strong_tot_share) << ','
            << format_real(row.phon_per_attempt_success) << ',' << row.resolved_immediate << ','
            << row.resolved_later;
        for (const auto& s : slots) {
            auto it = row.partial_info.find(s);
            if (it == row.partial_info.end()) {
                out << ",,,";
            } else {
                est(it->second);
            }
        }
        out << '\n';
    }
}

namespace {

nlohmann::json optional_json(const std::optional<double>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

nlohmann::json estimate_json(const RateEstimate& e) {
    return {{"rate", e.rate}, {"lo", e.lo}, {"hi", e.hi}};
}

}  // namespace

nlohmann::json records_to_json(const std::vector<TrialRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        arr.push_back({{"trial", r.trial},
                       {"sweep_index", r.sweep_index},
                       {"sweep_q", optional_json(r.sweep_q)},
                       {"sweep_d", optional_json(r.sweep_d)},
                       {"sweep_flip_rate", optional_json(r.sweep_flip_rate)},
                       {"episode", r.episode},
                       {"classification", std::string(to_string(r.classification))},
                       {"selected_word", r.selected_word ? nlohmann::json(*r.selected_word) : nlohmann::json(nullptr)},
                       {"sel_completeness", r.sel_completeness},
                       {"attempts", {{"semantic", r.attempts.semantic},
                                     {"lexical", r.attempts.lexical},
                                     {"phonological", r.attempts.phonological}}},
                       {"resolved", {{"semantic", r.resolved.semantic},
                                     {"lexical", r.resolved.lexical},
                                     {"phonological", r.resolved.phonological}}},
                       {"tot_strength", r.tot_strength},
                       {"strong", r.strong},
                       {"partial_info", r.partial_info},
                       {"total_time_ms", r.total_time_ms},
                       {"seed_child", r.seed_child}});
    }
    return arr;
}

nlohmann::json summary_to_json(const std::vector<SummaryRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json slots = nlohmann::json::object();
        for (const auto& [name, e] : row.partial_info) slots[name] = estimate_json(e);
        arr.push_back({{"sweep_index", row.sweep_index},
                       {"sweep_q", optional_json(row.sweep_q)},
                       {"sweep_d", optional_json(row.sweep_d)},
                       {"sweep_flip_rate", optional_json(row.sweep_flip_rate)},
                       {"records", row.records},
                       {"trials", row.trials},
                       {"resolved", estimate_json(row.resolved)},
                       {"tot", estimate_json(row.tot)},
                       {"no_access", estimate_json(row.no_access)},
                       {"mean_attempts", row.mean_attempts},
                       {"median_attempts", row.median_attempts},
                       {"mean_time_ms", row.mean_time_ms},
                       {"strong_tot_share", row.strong_tot_share},
                       {"phon_per_attempt_success", row.phon_per_attempt_success},
                       {"resolved_immediate", row.resolved_immediate},
                       {"resolved_later", row.resolved_later},
                       {"partial_info", std::move(slots)}});
    }
    return arr;
}

std::vector<std::string> validate_records(const std::vector<TrialRecord>& records,
                                          const RecallParams& params) {
    std::vector<std::string> problems;
    std::map<std::tuple<std::size_t, std::size_t>, const TrialRecord*> last_episode;

    for (std::size_t i = 0; i < records.size(); ++i) {
        const TrialRecord& r = records[i];
        auto fail = [&](const std::string& what) {
            problems.push_back("record " + std::to_string(i) + " (trial " + std::to_string(r.trial) +
                               ", episode " + std::to_string(r.episode) + "): " + what);
        };
        const auto& a = r.attempts;
        const auto& m = params.max_attempts;

        if (r.episode < 1) fail("episode must be >= 1");
        for (Component c : kComponents) {
            if (a[c] > m[c]) fail(std::string(to_string(c)) + " attempts exceed max_attempts");
        }
        if (r.tot_strength < 0.0 || r.tot_strength > 1.0) fail("tot_strength outside [0, 1]");
        if (r.sel_completeness < 0.0 || r.sel_completeness > 1.0) fail("sel_completeness outside [0, 1]");

        switch (r.classification) {
            case Classification::NoAccess:
                if (a.semantic || a.lexical || a.phonological) fail("NoAccess with attempted components");
                if (r.tot_strength != 0.0) fail("NoAccess with nonzero tot_strength");
                for (const auto& [slot, hit] : r.partial_info) {
                    if (hit) fail("NoAccess with partial information in slot " + slot);
                }
                break;
            case Classification::Resolved:
                if (!a.semantic || !a.lexical || !a.phonological) fail("Resolved with an unattempted component");
                if (r.tot_strength != 1.0) fail("Resolved with tot_strength != 1");
                for (const auto& [slot, hit] : r.partial_info) {
                    if (!hit) fail("Resolved but slot " + slot + " does not match");
                }
                break;
            case Classification::Tot:
                if (!a.semantic) fail("TOT without a semantic attempt");
                if (a.phonological && !a.lexical) fail("phonological attempted before lexical");
                // A component that did not hand over to the next one ran out of attempts.
                if (!a.lexical && a.semantic != m.semantic) fail("semantic stopped early without resolving");
                if (a.lexical && !a.phonological && a.lexical != m.lexical) {
                    fail("lexical stopped early without resolving");
                }
                if (a.phonological && a.phonological != m.phonological) {
                    fail("phonological stopped early in a TOT");
                }
                if (!a.phonological && r.tot_strength != 0.0) fail("TOT strength without phonological attempts");
                break;
        }

        double expected = 0.0;
        for (Component c : kComponents) expected += chronometry(a[c], params.chronometry);
        if (std::abs(expected - r.total_time_ms) > 5e-4) {
            fail("total_time_ms " + format_ms(r.total_time_ms) + " != chronometry sum " + format_ms(expected));
        }

        const auto key = std::make_tuple(r.sweep_index, r.trial);
        auto it = last_episode.find(key);
        if (it == last_episode.end()) {
            if (r.episode != 1) fail("first record of a trial is not episode 1");
        } else {
            if (r.episode != it->second->episode + 1) fail("episodes out of sequence");
            if (it->second->classification == Classification::Resolved) fail("episode after a resolved episode");
        }
        last_episode[key] = &r;
    }
    return problems;
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw Error("failed writing '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace totsim
