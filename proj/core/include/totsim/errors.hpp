#pragma once

#include <stdexcept>
#include <string>

namespace totsim {

/// Base of every error raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lengths or index sets that do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A numeric parameter outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

/// Random generation could not satisfy its constraints within the retry budget.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Exhaustive enumeration requested over too many free units.
class CapacityError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

/// Invalid scenario or lexicon configuration. `path` names the offending
/// field in dotted/indexed form, e.g. `recall.cue_fraction.phonological`.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace totsim
