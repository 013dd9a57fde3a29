#pragma once

#include <cstdint>

#include "arw/core/toppling.hpp"

namespace arw {

/// Rule for picking the next unstable site to topple.
struct TopplingPolicy {
    enum class Kind : std::uint8_t { LowestFirst, HighestFirst, Random };

    Kind kind = Kind::LowestFirst;
    std::uint64_t seed = 0;  ///< only used by Random

    static constexpr TopplingPolicy lowest_first() noexcept { return {Kind::LowestFirst, 0}; }
    static constexpr TopplingPolicy highest_first() noexcept { return {Kind::HighestFirst, 0}; }
    static constexpr TopplingPolicy random(std::uint64_t seed) noexcept { return {Kind::Random, seed}; }
};

enum class StabilizeStatus : std::uint8_t { Stable, BudgetExhausted };

/// Topples unstable sites of `system` under `policy` until the configuration
/// is stable or the budget runs out. Returns the jumps made by this call.
struct StabilizeRun {
    StabilizeStatus status;
    std::uint64_t jumps;
};
StabilizeRun stabilize(ArwSystem& system, TopplingPolicy policy = TopplingPolicy::lowest_first());

/// Stabilization of a configuration by the lowest-index-first sweep.
/// A budget-exhausted result carries the partial state.
struct StabilizeResult {
    StabilizeStatus status;
    Configuration config;
    OdometerMap odometer;
    std::uint64_t jumps;
};
StabilizeResult stabilize_greedy(const Configuration& config, const InstructionTapes& tapes,
                                 std::uint64_t budget = kDefaultInstructionBudget,
                                 TopplingPolicy policy = TopplingPolicy::lowest_first());

enum class AbelianVerdict : std::uint8_t { Equal, Different, Inconclusive };

/// Stabilizes `config` twice on identical copies of `tapes`, once per policy,
/// and compares final configurations and odometers.
AbelianVerdict check_abelian(const Configuration& config, const InstructionTapes& tapes, TopplingPolicy order_a,
                             TopplingPolicy order_b, std::uint64_t budget = kDefaultInstructionBudget);

/// Topples sites holding two or more particles until every site holds at
/// most one. Sites with a single active particle are left untouched.
StabilizeStatus preprocess_multi(ArwSystem& system);

}  // namespace arw
