#include "arw/carpet/flow_invariance.hpp"

#include "arw/carpet/engine.hpp"

namespace arw::carpet {

FlowInvarianceReport verify_flow_invariance(std::int64_t n, std::int64_t a, double sleep_rate, double zeta,
                                            std::uint64_t seed, std::uint64_t budget) {
    const CarpetProcedure start =
        CarpetProcedure::init_first_mode(zeta, BlockLayout::build(n, a), sleep_rate, seed, budget);

    FlowInvarianceReport report;
    CarpetProcedure full = start;
    const ModeReport mode = full.run_mode();
    if (mode.truncated) return report;

    bool all_equal = true;
    for (std::int64_t label = 1; label <= n; ++label) {
        const BlockFlow& target = mode.flows[static_cast<std::size_t>(label)];
        BlockComparison cmp;
        cmp.label = label;
        cmp.full = target;
        cmp.injected = target.arrived_parked + target.arrived_vacant;

        CarpetProcedure replay = start;
        replay.begin_mode();
        bool complete = replay.run_attempts(label);
        for (std::uint64_t k = 0; complete && k < cmp.injected; ++k) {
            replay.inject_from_right(label);
            complete = replay.run_attempts(label);
        }
        if (!complete) return FlowInvarianceReport{};

        const ModeReport restricted = replay.end_mode();
        cmp.replay = restricted.flows[static_cast<std::size_t>(label)];
        cmp.equal = cmp.replay.frozen == target.frozen && cmp.replay.emitted_left == target.emitted_left &&
                    cmp.replay.emitted_right == target.emitted_right &&
                    cmp.replay.arrived_vacant == target.arrived_vacant;
        all_equal = all_equal && cmp.equal;
        report.blocks.push_back(cmp);
    }
    report.verdict = all_equal ? InvarianceVerdict::Holds : InvarianceVerdict::Violated;
    return report;
}

}  // namespace arw::carpet
