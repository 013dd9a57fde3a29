#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "arw/carpet/engine.hpp"
#include "arw/carpet/state.hpp"
#include "arw/core/toppling.hpp"

namespace arw::mc {

struct GridCell {
    std::int64_t n = 4;
    std::int64_t a = 4;
    double sleep_rate = 0.5;
    double zeta = 0.97;

    std::int64_t block_size() const noexcept { return a * a; }
    std::int64_t ring_size() const noexcept { return (n + 2) * a * a; }

    friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct ExperimentSpec {
    std::vector<GridCell> cells;
    std::uint64_t replicas = 20;
    std::uint64_t master_seed = 0;
    std::int64_t max_modes = 1000;
    std::uint64_t budget = kDefaultInstructionBudget;
    std::string output = ".";
    bool record_holes = false;
    unsigned threads = 0;  ///< 0: one per hardware thread

    /// Cartesian product, n varying slowest and zeta fastest.
    static std::vector<GridCell> grid(const std::vector<std::int64_t>& ns, const std::vector<std::int64_t>& as,
                                      const std::vector<double>& sleep_rates, const std::vector<double>& zetas);

    /// Throws ParameterError on an empty grid, zero replicas or a cell that
    /// violates the layout or density preconditions.
    void validate() const;
};

enum class Termination : std::uint8_t { Condition1Fail, NoEligible, Budget, MaxModes };

std::string_view to_string(Termination t) noexcept;

struct ReplicaResult {
    GridCell cell;
    std::size_t cell_index = 0;
    std::uint64_t replica = 0;
    std::uint64_t seed = 0;
    std::int64_t modes = 0;  ///< completed modes
    std::vector<carpet::ModeReport> mode_reports;  ///< completed modes only
    std::uint64_t procedure_jumps = 0;
    std::uint64_t residual_jumps = 0;
    std::uint64_t total_jumps = 0;  ///< J; a lower bound when terminated by the budget
    Termination terminated_by = Termination::NoEligible;
    std::int64_t free_final = 0;
    std::int64_t frozen_final = 0;
    std::int64_t defects_final = 0;
    std::int64_t particles = 0;  ///< initial particle count
    bool conserved = true;       ///< final particle count equals the initial one
    std::uint64_t consecutive_failures = 0;  ///< see CarpetProcedure::consecutive_failures
    bool mode_truncated = false; ///< the budget ran out inside the mode loop, not just in the final stabilization
    std::vector<carpet::HoleRecord> holes;
};

/// Optional callbacks into a running replica, for checking and dumping.
struct ReplicaHooks {
    std::function<void(const carpet::CarpetProcedure&)> at_start;
    std::function<void(const carpet::CarpetProcedure&, const carpet::HoleRecord&)> after_attempt;
    std::function<void(const carpet::CarpetProcedure&, const carpet::ModeReport&)> after_mode;
};

/// init, mode loop, finalize for one replica. The mode loop stops when a
/// mode fails Condition 1, when no block is eligible at the start of a
/// mode, when the budget runs out, or after `max_modes` modes.
ReplicaResult run_replica(const GridCell& cell, std::uint64_t seed, std::int64_t max_modes, std::uint64_t budget,
                          bool record_holes = false, const ReplicaHooks& hooks = {});

/// Seed of replica r in cell c.
std::uint64_t replica_seed(std::uint64_t master_seed, std::size_t cell_index, std::uint64_t replica) noexcept;

/// All replicas of all cells, ordered by (cell, replica) whatever the
/// thread count.
std::vector<ReplicaResult> run_replicas(const ExperimentSpec& spec);

}  // namespace arw::mc
