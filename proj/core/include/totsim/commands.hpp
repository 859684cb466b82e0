#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace totsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

struct SimulateOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;
    std::string format = "csv";
};

/// Runs a scenario and writes records, summary and metadata.json into
/// `out_dir`. Returns kExitConfigError on validation failures.
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct OracleOptions {
    std::filesystem::path config_path;
    std::string word;
    std::string component;
    std::size_t cue_size = 0;
};

/// Prints "num/den = decimal" for the undamaged network of the given word
/// component, with the first `cue_size` units cued.
int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err);

/// Prints the normalized config on success.
int cmd_validate(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

}  // namespace totsim
