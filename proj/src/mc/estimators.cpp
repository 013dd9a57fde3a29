#include "arw/mc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace arw::mc {

Interval wilson_interval(std::uint64_t successes, std::uint64_t total, double z) {
    if (total == 0) return {0.0, 1.0};
    const double n = static_cast<double>(total);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<ModeSuccessEstimate> estimate_mode_success(const std::vector<ReplicaResult>& results) {
    std::map<std::size_t, ModeSuccessEstimate> cells;
    for (const ReplicaResult& r : results) {
        ModeSuccessEstimate& e = cells[r.cell_index];
        e.cell_index = r.cell_index;
        e.cell = r.cell;
        for (const carpet::ModeReport& m : r.mode_reports) {
            if (m.truncated) continue;
            ++e.total;
            if (m.condition1) ++e.successes;
        }
    }
    std::vector<ModeSuccessEstimate> out;
    for (auto& [index, e] : cells) {
        if (e.total > 0) {
            e.estimate = static_cast<double>(e.successes) / static_cast<double>(e.total);
            e.interval = wilson_interval(e.successes, e.total);
        }
        out.push_back(e);
    }
    return out;
}

std::vector<JumpsRow> sweep_J_vs_N(const std::vector<ReplicaResult>& results) {
    struct Acc {
        JumpsRow row;
        double sum = 0.0;
        double sum_sq = 0.0;
        double modes = 0.0;
    };
    std::map<std::size_t, Acc> cells;
    for (const ReplicaResult& r : results) {
        Acc& acc = cells[r.cell_index];
        acc.row.cell_index = r.cell_index;
        acc.row.cell = r.cell;
        acc.row.ring_size = r.cell.ring_size();
        ++acc.row.replicas;
        const double j = static_cast<double>(r.total_jumps);
        acc.sum += j;
        acc.sum_sq += j * j;
        acc.modes += static_cast<double>(r.modes);
        if (r.terminated_by == Termination::Budget) ++acc.row.budget_limited;
    }
    std::vector<JumpsRow> out;
    for (auto& [index, acc] : cells) {
        const double n = static_cast<double>(acc.row.replicas);
        acc.row.mean_jumps = acc.sum / n;
        acc.row.mean_modes = acc.modes / n;
        if (acc.row.replicas > 1) {
            const double var = (acc.sum_sq - n * acc.row.mean_jumps * acc.row.mean_jumps) / (n - 1.0);
            acc.row.std_error = std::sqrt(std::max(var, 0.0) / n);
        }
        out.push_back(acc.row);
    }
    return out;
}

std::optional<LineFit> fit_log_jumps(const std::vector<JumpsRow>& rows) {
    std::set<std::int64_t> distinct;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const JumpsRow& r : rows) {
        if (!(r.mean_jumps > 0.0)) return std::nullopt;
        distinct.insert(r.ring_size);
        const double x = static_cast<double>(r.ring_size);
        const double y = std::log(r.mean_jumps);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (distinct.size() < 2) return std::nullopt;
    const double n = static_cast<double>(rows.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return LineFit{slope, (sy - slope * sx) / n};
}

std::optional<HoleDriftStats> hole_drift_stats(const std::vector<carpet::HoleRecord>& records, std::int64_t a) {
    if (records.empty()) return std::nullopt;
    HoleDriftStats stats;
    stats.a = a;
    auto class_of = [a](std::int64_t h) -> std::string {
        if (h == a) return "a";
        if (3 * h <= a) return "[0,a/3]";
        if (2 * h <= a) return "(a/3,a/2]";
        return "(a/2,a)";
    };
    auto add = [](HolePositionSummary& s, double delta, bool exceed) {
        ++s.count;
        s.mean_delta += delta;
        s.exceed_fraction += exceed ? 1.0 : 0.0;
    };
    for (const carpet::HoleRecord& r : records) {
        const double delta = static_cast<double>(r.hole_after - r.hole_before);
        const bool exceed = 2 * r.hole_after > a;
        add(stats.by_position[r.hole_before], delta, exceed);
        add(stats.by_class[class_of(r.hole_before)], delta, exceed);
        ++stats.steps_histogram[r.steps];
    }
    auto finish = [](HolePositionSummary& s) {
        s.mean_delta /= static_cast<double>(s.count);
        s.exceed_fraction /= static_cast<double>(s.count);
    };
    for (auto& [h, s] : stats.by_position) finish(s);
    for (auto& [c, s] : stats.by_class) finish(s);
    return stats;
}

}  // namespace arw::mc
