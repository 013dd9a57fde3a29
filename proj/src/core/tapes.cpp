#include "arw/core/tapes.hpp"

#include <cmath>
#include <string>

#include "arw/core/errors.hpp"

namespace arw {

std::string_view to_string(Instruction instr) noexcept {
    switch (instr) {
        case Instruction::JumpRight:
            return "R";
        case Instruction::JumpLeft:
            return "L";
        case Instruction::Sleep:
            return "S";
    }
    return "?";
}

std::string_view to_string(StreamTag tag) noexcept {
    switch (tag) {
        case StreamTag::Single:
            return "single";
        case StreamTag::Left:
            return "L";
        case StreamTag::Right:
            return "R";
    }
    return "?";
}

StreamLayout StreamLayout::blocks(std::int64_t block_size, std::int64_t hole_span) {
    if (block_size < 2 || hole_span < 0 || hole_span >= block_size) {
        throw ParameterError("stream layout needs 0 <= hole_span < block_size");
    }
    return StreamLayout{block_size, hole_span};
}

InstructionTapes::InstructionTapes(std::uint64_t seed, double sleep_rate, std::int64_t ring_size,
                                   StreamLayout layout)
    : seed_(seed), sleep_rate_(sleep_rate), layout_(layout) {
    if (!(sleep_rate >= 0.0) || !std::isfinite(sleep_rate)) {
        throw ParameterError("sleep rate must be finite and non-negative");
    }
    if (ring_size < 1) {
        throw ParameterError("ring size must be positive");
    }
    const double p = 1.0 / (2.0 * (1.0 + sleep_rate));
    right_below_ = static_cast<std::uint64_t>(std::llround(std::ldexp(p, 32)));
    left_below_ = sleep_rate == 0.0 ? (std::uint64_t{1} << 32) : 2 * right_below_;
    streams_.resize(static_cast<std::size_t>(ring_size) * 3);
    for (std::int64_t site = 0; site < ring_size; ++site) {
        for (std::uint32_t tag = 0; tag < 3; ++tag) {
            streams_[slot(site, static_cast<StreamTag>(tag))].key =
                Philox4x32::bits64(seed, 0, static_cast<std::uint32_t>(site), tag);
        }
    }
}

void InstructionTapes::reject(std::int64_t site, StreamTag tag) const {
    if (site < 0 || site >= ring_size()) {
        throw UsageError("site " + std::to_string(site) + " outside the ring");
    }
    throw UsageError("site " + std::to_string(site) + " has no " + std::string(to_string(tag)) + " stream");
}

Instruction InstructionTapes::peek(std::int64_t site, StreamTag tag, std::uint64_t index) const {
    if (site < 0 || site >= ring_size() || !layout_.accepts(site, tag)) {
        reject(site, tag);
    }
    return draw(streams_[slot(site, tag)].key, index);
}

}  // namespace arw
