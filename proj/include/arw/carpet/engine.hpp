#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "arw/carpet/layout.hpp"
#include "arw/carpet/state.hpp"
#include "arw/core/stabilize.hpp"
#include "arw/core/toppling.hpp"

namespace arw::carpet {

/// Called after every attempted emission with the attempt's hole record.
using AttemptObserver = std::function<void(const HoleRecord&)>;

struct FinalizeResult {
    StabilizeStatus status = StabilizeStatus::Stable;
    std::uint64_t total_jumps = 0;     ///< procedure jumps plus residual jumps
    std::uint64_t residual_jumps = 0;  ///< jumps made by the final greedy stabilization
    Configuration config{1};
};

/// The carpet toppling procedure on Z_N: configuration, instruction stacks
/// and particle labels, advanced one attempted emission at a time.
///
/// Only the hot particle's site is ever toppled. Stream tags follow the hot
/// particle's origin: hole-zone sites of the emitting block use their single
/// stack, corridor sites use L for particles from the block on their left and
/// R for particles from the block on their right, and hole-zone sites of a
/// defective left neighbour use their R stack.
class CarpetProcedure {
public:
    /// Labels an arbitrary configuration with at most one active particle per
    /// site: particles at iK are free and thawed, others are carpet, holes at
    /// iK, empty non-hole sites are defects. `tapes` must use the block
    /// stream layout of `layout`. Requires a >= 4 so the hole zone fits in
    /// the right half of a block.
    CarpetProcedure(BlockLayout layout, Configuration config, InstructionTapes tapes,
                    std::uint64_t budget = kDefaultInstructionBudget);

    /// Bernoulli(zeta) start. Configuration and tapes are derived from `seed`.
    static CarpetProcedure init_first_mode(double zeta, BlockLayout layout, double sleep_rate, std::uint64_t seed,
                                           std::uint64_t budget = kDefaultInstructionBudget);

    /// Smallest label in [1, max_label] whose block has no defects and a
    /// thawed free particle; prefers iK over iK + a, then the lowest id.
    std::optional<HotChoice> choose_hot(std::int64_t max_label) const;
    std::optional<HotChoice> choose_hot() const { return choose_hot(layout_.n()); }

    /// Runs one attempted emission from `choice`. Throws BudgetExhausted
    /// (leaving the hot particle mid-walk) and EngineInvariantViolation.
    EmissionOutcome attempted_emission(const HotChoice& choice);

    /// begin_mode + run_attempts(n) + end_mode.
    ModeReport run_mode(const AttemptObserver& observer = {});

    /// Resets the flow counters and records the mode's starting totals.
    void begin_mode();
    /// Attempted emissions from labels [1, max_label] until none is eligible.
    /// Returns false if the budget ran out.
    bool run_attempts(std::int64_t max_label, const AttemptObserver& observer = {});
    ModeReport end_mode(bool truncated = false) const;

    /// Rotates labels so this mode's sources become the next mode's sinks.
    void relabel_blocks();

    /// Lands one particle in block `label` as if emitted by its right
    /// neighbour, tallying it as D or M.
    void inject_from_right(std::int64_t label);

    /// Greedy stabilization of whatever configuration is left. Labels are
    /// meaningless afterwards and further procedure calls throw UsageError.
    FinalizeResult finalize_stabilization();

    /// Violated properties; empty when the state is consistent.
    std::vector<Property> assert_properties() const;

    const BlockLayout& layout() const noexcept { return layout_; }
    const ArwSystem& system() const noexcept { return system_; }
    const Configuration& config() const noexcept { return system_.config(); }
    std::uint64_t jumps() const noexcept { return system_.jumps(); }
    std::int64_t mode() const noexcept { return mode_; }
    bool finalized() const noexcept { return finalized_; }

    const SiteLabels& labels(std::int64_t site) const { return labels_[static_cast<std::size_t>(site)]; }
    const std::vector<FreeParticle>& free_particles() const noexcept { return free_; }
    std::optional<std::uint64_t> hot() const noexcept { return hot_; }
    /// Offset of the hole of physical block `block` from its centre.
    std::int64_t hole_offset(std::int64_t block) const { return hole_[static_cast<std::size_t>(block)]; }
    std::int64_t defects(std::int64_t block) const { return defects_[static_cast<std::size_t>(block)]; }
    /// Flow tallies of the current mode, by physical block.
    const BlockFlow& flow(std::int64_t block) const { return flows_[static_cast<std::size_t>(block)]; }

    std::int64_t free_count() const noexcept { return static_cast<std::int64_t>(free_.size()); }
    std::int64_t frozen_count() const noexcept;
    std::int64_t defect_count() const noexcept;

    /// Number of times a block followed a Failure with another Failure.
    std::uint64_t consecutive_failures() const noexcept { return consecutive_failures_; }

    /// Keeps every hole record in memory (off by default).
    void set_record_holes(bool on) noexcept { record_holes_ = on; }
    const std::vector<HoleRecord>& hole_records() const noexcept { return hole_records_; }

    /// Direct access for tests that corrupt the state on purpose.
    SiteLabels& mutable_labels(std::int64_t site) { return labels_[static_cast<std::size_t>(site)]; }
    std::vector<FreeParticle>& mutable_free_particles() noexcept { return free_; }
    Configuration& mutable_config() noexcept { return system_.mutable_config(); }

private:
    enum class Phase : std::uint8_t { Seeking, AtHole, Excursion, Frozen };

    std::size_t index_of(std::uint64_t id) const;
    std::size_t add_free(std::int64_t site, bool frozen);
    void erase_free(std::size_t index);
    void move_hole(std::int64_t block, std::int64_t offset);
    void land(std::int64_t receiver, std::int64_t site, bool from_right, std::optional<std::size_t> particle);
    void finish_attempt(std::int64_t block, std::int64_t label, std::int64_t hole_before, std::uint64_t steps,
                        EmissionOutcome outcome);
    void require(bool condition, const char* what) const;
    void require_live() const;

    BlockLayout layout_;
    ArwSystem system_;
    std::vector<SiteLabels> labels_;
    std::vector<FreeParticle> free_;
    std::vector<std::int64_t> hole_;
    std::vector<std::int64_t> defects_;
    std::vector<std::int64_t> frozen_;
    std::vector<BlockFlow> flows_;
    std::vector<std::uint64_t> attempts_;
    std::vector<std::uint8_t> last_failed_;
    std::optional<std::uint64_t> hot_;
    std::uint64_t next_id_ = 0;
    std::int64_t mode_ = 0;
    std::uint64_t mode_start_jumps_ = 0;
    std::int64_t mode_start_balance_ = 0;
    std::uint64_t consecutive_failures_ = 0;
    bool record_holes_ = false;
    bool finalized_ = false;
    std::vector<HoleRecord> hole_records_;
    HoleRecord last_record_;
};

}  // namespace arw::carpet
