#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace arw::carpet {

/// Label bookkeeping for one site. A site carries at most one carpet particle.
struct SiteLabels {
    bool carpet = false;
    bool hole = false;
    bool defect = false;

    friend bool operator==(const SiteLabels&, const SiteLabels&) = default;
};

/// A non-carpet particle. Thawed free particles are candidates for the hot
/// particle; a frozen one sits at iK + a until its block resets.
struct FreeParticle {
    std::uint64_t id = 0;
    std::int64_t site = 0;
    bool frozen = false;

    friend bool operator==(const FreeParticle&, const FreeParticle&) = default;
};

struct HotChoice {
    std::int64_t label = 0;
    std::int64_t block = 0;  ///< physical block
    std::int64_t site = 0;
    std::uint64_t particle = 0;

    friend bool operator==(const HotChoice&, const HotChoice&) = default;
};

enum class EmissionOutcome : std::uint8_t { EmittedLeft, EmittedRight, Failure };

std::string_view to_string(EmissionOutcome outcome) noexcept;

/// Per-block flow tallies for one mode.
///   emitted_left   L: particles emitted to the left neighbour
///   emitted_right  R: particles emitted to the right neighbour
///   arrived_vacant D: arrivals from the right neighbour that fixed a defect
///                     or reached the hole of this (defective) block
///   arrived_parked M: arrivals from the right neighbour parked at iK + a
///   frozen         S: frozen particles in the block (0 or 1)
struct BlockFlow {
    std::uint64_t emitted_left = 0;
    std::uint64_t emitted_right = 0;
    std::uint64_t arrived_vacant = 0;
    std::uint64_t arrived_parked = 0;
    std::int64_t frozen = 0;
    bool emitted = false;  ///< at least one successful emission this mode

    friend bool operator==(const BlockFlow&, const BlockFlow&) = default;
};

/// One attempted emission, as seen from the hole of the emitting block.
struct HoleRecord {
    std::int64_t mode = 0;
    std::int64_t block = 0;  ///< physical block
    std::int64_t label = 0;
    std::uint64_t attempt = 0;  ///< per-block attempt index j, counted over the whole run
    std::int64_t hole_before = 0;
    std::int64_t hole_after = 0;  ///< H(j), offset of the hole from iK
    std::uint64_t steps = 0;      ///< T_j
    EmissionOutcome outcome = EmissionOutcome::Failure;
};

struct ModeReport {
    std::int64_t mode = 0;
    std::uint64_t attempts = 0;
    std::uint64_t emissions = 0;
    std::uint64_t failures = 0;
    std::int64_t free = 0;
    std::int64_t frozen = 0;
    std::int64_t defects = 0;
    std::uint64_t jumps = 0;  ///< jumps made during the mode
    bool condition1 = false;
    std::int64_t frozen_in_emitters = 0;  ///< F(E_n)
    std::int64_t frozen_total = 0;        ///< F(Z_N)
    bool truncated = false;               ///< the instruction budget ran out mid-mode
    std::int64_t free_minus_defects_start = 0;
    std::vector<BlockFlow> flows;  ///< indexed by label 0..n+1
};

/// free >= 7n/8 + D and frozen <= 5n/8, in exact integer arithmetic.
constexpr bool check_condition1(std::int64_t n, std::int64_t free, std::int64_t frozen, std::int64_t defects) noexcept {
    return 8 * free >= 7 * n + 8 * defects && 8 * frozen <= 5 * n;
}
inline bool check_condition1(const ModeReport& report, std::int64_t n) noexcept {
    return check_condition1(n, report.free, report.frozen, report.defects);
}

enum class Property : std::uint8_t { P1, P2, P4, P5, P6, P7, P8, P9, P10, Bookkeeping };

std::string_view to_string(Property p) noexcept;

}  // namespace arw::carpet
