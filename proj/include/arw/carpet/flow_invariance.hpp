#pragma once

#include <cstdint>
#include <vector>

#include "arw/carpet/state.hpp"
#include "arw/core/toppling.hpp"

namespace arw::carpet {

enum class InvarianceVerdict : std::uint8_t { Holds, Violated, Inconclusive };

struct BlockComparison {
    std::int64_t label = 0;
    std::uint64_t injected = 0;  ///< M_i + D_i fed back into the replay
    BlockFlow full;              ///< counters of block i in the full mode
    BlockFlow replay;            ///< counters of block i in the restricted replay
    bool equal = false;
};

struct FlowInvarianceReport {
    InvarianceVerdict verdict = InvarianceVerdict::Inconclusive;
    std::vector<BlockComparison> blocks;  ///< labels 1..n
};

/// Runs the first mode on blocks 1..n, then for each i replays the mode from
/// the same start restricted to labels 1..i, feeding block i the M_i + D_i
/// arrivals it received from block i + 1 one at a time whenever the
/// restricted procedure runs dry. Block i's S, L, R and D must agree.
FlowInvarianceReport verify_flow_invariance(std::int64_t n, std::int64_t a, double sleep_rate, double zeta,
                                            std::uint64_t seed, std::uint64_t budget = kDefaultInstructionBudget);

}  // namespace arw::carpet
