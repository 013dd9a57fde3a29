#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace arw {

/// Invalid model or layout parameters (odd block counts, densities outside (0,1), ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A caller asked for something the data structure does not support,
/// e.g. a corridor stream on a single-stream site.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Toppling a stable site.
class IllegalToppling : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The instruction budget ran out. Carries how many instructions were consumed.
class BudgetExhausted : public std::runtime_error {
public:
    explicit BudgetExhausted(std::uint64_t consumed)
        : std::runtime_error("instruction budget exhausted after " + std::to_string(consumed) +
                             " instructions"),
          consumed_(consumed) {}

    std::uint64_t consumed() const noexcept { return consumed_; }

private:
    std::uint64_t consumed_;
};

/// Internal consistency failure inside the carpet engine. Never a valid outcome.
class EngineInvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace arw
