#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "totsim/exper.hpp"
#include "totsim/recall.hpp"

namespace totsim {

inline constexpr std::string_view kRecordsCsvHeader =
    "trial,sweep_q,sweep_d,episode,classification,sel_completeness,att_sem,att_lex,att_phon,"
    "tot_strength,slot_first_letter,total_time_ms,seed_child";

inline constexpr int kRecordsSchemaVersion = 1;

/// Shortest decimal text that reads back to the same double.
std::string format_real(double x);

/// Fixed three fractional digits, as used for times in ms.
std::string format_ms(double ms);

/// Records CSV: the fixed header, then one line per record. Absent sweep
/// coordinates and an absent first_letter slot are empty cells; booleans
/// are 0/1.
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);

/// Reads the records CSV back. Only the columns of the fixed schema are
/// restored. Throws UsageError on a malformed header or line.
std::vector<TrialRecord> parse_records_csv(std::istream& in);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

nlohmann::json records_to_json(const std::vector<TrialRecord>& records);
nlohmann::json summary_to_json(const std::vector<SummaryRow>& rows);

/// Checks every record against the outcome invariants that are visible in
/// the CSV columns. Returns one message per violation; empty means valid.
std::vector<std::string> validate_records(const std::vector<TrialRecord>& records,
                                          const RecallParams& params);

/// Writes `content` to a temporary file beside `path` and renames it into
/// place, so `path` is either untouched or complete.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace totsim
