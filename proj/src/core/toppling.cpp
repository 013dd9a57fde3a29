#include "arw/core/toppling.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "arw/core/errors.hpp"

namespace arw {

std::uint64_t OdometerMap::total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t OdometerMap::max() const noexcept {
    return counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end());
}

std::int64_t OdometerMap::sites_toppled() const noexcept {
    return std::count_if(counts_.begin(), counts_.end(), [](std::uint64_t c) { return c > 0; });
}

bool apply_instruction(Configuration& config, std::int64_t site, Instruction instr) {
    SiteState& here = config[site];
    if (here.is_stable()) {
        throw IllegalToppling("toppling stable site " + std::to_string(site));
    }
    switch (instr) {
        case Instruction::Sleep:
            return here.fall_asleep();
        case Instruction::JumpRight:
        case Instruction::JumpLeft: {
            const std::int64_t target = config.wrap(site + (instr == Instruction::JumpRight ? 1 : -1));
            here.release();
            config[target].receive();
            return true;
        }
    }
    return false;
}

ArwSystem::ArwSystem(Configuration config, InstructionTapes tapes, std::uint64_t budget)
    : config_(std::move(config)), tapes_(std::move(tapes)), odometer_(config_.ring_size()), budget_(budget) {
    if (tapes_.ring_size() != config_.ring_size()) {
        throw ParameterError("tapes and configuration disagree on the ring size");
    }
}

void ArwSystem::reject_stable(std::int64_t site) {
    throw IllegalToppling("toppling stable site " + std::to_string(site));
}

void ArwSystem::write_trace(std::int64_t site, StreamTag tag, Instruction instr) const {
    *trace_ << instructions_ << '\t' << site << '\t' << to_string(instr) << '\t' << to_string(tag) << '\t'
            << config_[site].to_string() << '\n';
}

}  // namespace arw
