#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <optional>
#include <vector>

#include "arw/carpet/state.hpp"
#include "arw/mc/experiment.hpp"

namespace arw::mc {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Wilson score interval; z defaults to the two-sided 95% quantile.
Interval wilson_interval(std::uint64_t successes, std::uint64_t total, double z = 1.959963984540054);

struct ModeSuccessEstimate {
    std::size_t cell_index = 0;
    GridCell cell;
    std::uint64_t successes = 0;
    std::uint64_t total = 0;               ///< completed modes
    std::optional<double> estimate;        ///< empty when no mode ran
    Interval interval;
};

/// Fraction of completed modes meeting Condition 1, per cell.
std::vector<ModeSuccessEstimate> estimate_mode_success(const std::vector<ReplicaResult>& results);

struct JumpsRow {
    std::size_t cell_index = 0;
    GridCell cell;
    std::int64_t ring_size = 0;
    std::uint64_t replicas = 0;
    double mean_jumps = 0.0;
    double std_error = 0.0;
    double mean_modes = 0.0;
    std::uint64_t budget_limited = 0;  ///< replicas whose J is only a lower bound
};

/// Per-cell summary of J, ordered by cell index.
std::vector<JumpsRow> sweep_J_vs_N(const std::vector<ReplicaResult>& results);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares fit of log(mean J) against N. Requires two distinct N and
/// positive means.
std::optional<LineFit> fit_log_jumps(const std::vector<JumpsRow>& rows);

struct HolePositionSummary {
    std::uint64_t count = 0;
    double mean_delta = 0.0;        ///< mean of H(j) - H(j-1)
    double exceed_fraction = 0.0;   ///< fraction with H(j) > a/2
};

struct HoleDriftStats {
    std::int64_t a = 0;
    /// Keyed by H(j-1).
    std::map<std::int64_t, HolePositionSummary> by_position;
    /// H(j-1) classes [0, a/3], (a/3, a/2], (a/2, a), {a}.
    std::map<std::string, HolePositionSummary> by_class;
    std::map<std::uint64_t, std::uint64_t> steps_histogram;
};

/// Empirical hole statistics; empty input gives no data.
std::optional<HoleDriftStats> hole_drift_stats(const std::vector<carpet::HoleRecord>& records, std::int64_t a);

}  // namespace arw::mc
