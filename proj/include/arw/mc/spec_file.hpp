#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "arw/core/errors.hpp"
#include "arw/mc/experiment.hpp"

namespace arw::mc {

/// Malformed `key = value` text. what() starts with "line N:".
class SpecFileError : public ParameterError {
public:
    SpecFileError(int line, const std::string& message)
        : ParameterError("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

/// Flat `key = value` lines; `#` starts a comment, blank lines are skipped.
std::vector<KeyValue> parse_key_values(std::string_view text);

/// Sweep description. Keys: n, a, lambda, zeta (comma-separated lists),
/// seed, replicas, max-modes, budget, out, threads, holes. n, a, lambda,
/// zeta and seed are required.
ExperimentSpec parse_experiment_spec(std::string_view text);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

/// Reads a whole file; throws ParameterError if it cannot be opened.
std::string read_text(const std::filesystem::path& path);

}  // namespace arw::mc
