#include "arw/mc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "arw/carpet/engine.hpp"
#include "arw/core/errors.hpp"
#include "arw/core/philox.hpp"

namespace arw::mc {

std::string_view to_string(Termination t) noexcept {
    switch (t) {
        case Termination::Condition1Fail:
            return "condition1-fail";
        case Termination::NoEligible:
            return "no-eligible";
        case Termination::Budget:
            return "budget";
        case Termination::MaxModes:
            return "max-modes";
    }
    return "?";
}

std::vector<GridCell> ExperimentSpec::grid(const std::vector<std::int64_t>& ns, const std::vector<std::int64_t>& as,
                                           const std::vector<double>& sleep_rates, const std::vector<double>& zetas) {
    std::vector<GridCell> cells;
    for (std::int64_t n : ns) {
        for (std::int64_t a : as) {
            for (double l : sleep_rates) {
                for (double z : zetas) cells.push_back(GridCell{n, a, l, z});
            }
        }
    }
    return cells;
}

void ExperimentSpec::validate() const {
    if (cells.empty()) throw ParameterError("experiment grid is empty");
    if (replicas < 1) throw ParameterError("replicas must be at least 1");
    if (max_modes < 0) throw ParameterError("max-modes must be non-negative");
    for (const GridCell& c : cells) {
        carpet::BlockLayout::build(c.n, c.a);
        if (c.a < 4) throw ParameterError("the carpet procedure needs a >= 4");
        if (!(c.zeta > 0.0 && c.zeta < 1.0)) throw ParameterError("zeta must lie in (0, 1)");
        if (!(c.sleep_rate >= 0.0)) throw ParameterError("lambda must be non-negative");
    }
}

std::uint64_t replica_seed(std::uint64_t master_seed, std::size_t cell_index, std::uint64_t replica) noexcept {
    return derive_seed(master_seed, cell_index, replica);
}

ReplicaResult run_replica(const GridCell& cell, std::uint64_t seed, std::int64_t max_modes, std::uint64_t budget,
                          bool record_holes, const ReplicaHooks& hooks) {
    using carpet::CarpetProcedure;

    ReplicaResult r;
    r.cell = cell;
    r.seed = seed;
    CarpetProcedure proc =
        CarpetProcedure::init_first_mode(cell.zeta, carpet::BlockLayout::build(cell.n, cell.a), cell.sleep_rate, seed,
                                         budget);
    proc.set_record_holes(record_holes);
    r.particles = proc.config().total_particles();
    if (hooks.at_start) hooks.at_start(proc);

    r.terminated_by = Termination::MaxModes;
    for (std::int64_t m = 0; m < max_modes; ++m) {
        if (!proc.choose_hot()) {
            r.terminated_by = Termination::NoEligible;
            break;
        }
        carpet::AttemptObserver observer;
        if (hooks.after_attempt) {
            observer = [&](const carpet::HoleRecord& h) { hooks.after_attempt(proc, h); };
        }
        carpet::ModeReport report = proc.run_mode(observer);
        if (hooks.after_mode) hooks.after_mode(proc, report);
        if (report.truncated) {
            r.terminated_by = Termination::Budget;
            r.mode_truncated = true;
            break;
        }
        const bool success = report.condition1;
        r.mode_reports.push_back(std::move(report));
        ++r.modes;
        if (!success) {
            r.terminated_by = Termination::Condition1Fail;
            break;
        }
        proc.relabel_blocks();
    }

    r.free_final = proc.free_count();
    r.frozen_final = proc.frozen_count();
    r.defects_final = proc.defect_count();
    r.procedure_jumps = proc.jumps();
    r.holes = proc.hole_records();
    r.consecutive_failures = proc.consecutive_failures();

    const carpet::FinalizeResult fin = proc.finalize_stabilization();
    r.residual_jumps = fin.residual_jumps;
    r.total_jumps = fin.total_jumps;
    if (fin.status == StabilizeStatus::BudgetExhausted) r.terminated_by = Termination::Budget;
    r.conserved = fin.config.total_particles() == r.particles;
    return r;
}

std::vector<ReplicaResult> run_replicas(const ExperimentSpec& spec) {
    spec.validate();
    struct Task {
        std::size_t cell;
        std::uint64_t replica;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < spec.cells.size(); ++c) {
        for (std::uint64_t r = 0; r < spec.replicas; ++r) tasks.push_back({c, r});
    }
    std::vector<ReplicaResult> results(tasks.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                const Task& t = tasks[i];
                ReplicaResult res = run_replica(spec.cells[t.cell], replica_seed(spec.master_seed, t.cell, t.replica),
                                                spec.max_modes, spec.budget, spec.record_holes);
                res.cell_index = t.cell;
                res.replica = t.replica;
                results[i] = std::move(res);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    unsigned threads = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace arw::mc
