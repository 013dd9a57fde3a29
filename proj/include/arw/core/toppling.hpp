#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "arw/core/configuration.hpp"
#include "arw/core/errors.hpp"
#include "arw/core/tapes.hpp"

namespace arw {

inline constexpr std::uint64_t kDefaultInstructionBudget = 1'000'000'000ull;

/// Per-site toppling counts.
class OdometerMap {
public:
    explicit OdometerMap(std::int64_t ring_size) : counts_(static_cast<std::size_t>(ring_size), 0) {}

    std::uint64_t operator[](std::int64_t site) const noexcept { return counts_[static_cast<std::size_t>(site)]; }
    void increment(std::int64_t site) noexcept { ++counts_[static_cast<std::size_t>(site)]; }

    std::int64_t ring_size() const noexcept { return static_cast<std::int64_t>(counts_.size()); }
    std::uint64_t total() const noexcept;
    std::uint64_t max() const noexcept;
    std::int64_t sites_toppled() const noexcept;
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

    friend bool operator==(const OdometerMap&, const OdometerMap&) = default;

private:
    std::vector<std::uint64_t> counts_;
};

/// Applies one instruction at an unstable site. Jumps move one active
/// particle to the neighbour (a jump onto a sleeping particle wakes it);
/// Sleep turns Active(1) into Sleeping and is an identity otherwise.
/// Returns whether the configuration changed. Throws IllegalToppling on a
/// stable site.
bool apply_instruction(Configuration& config, std::int64_t site, Instruction instr);

struct ToppleOutcome {
    Instruction instruction;
    bool jumped;
    std::int64_t target;  ///< site now holding the moved particle; equals the toppled site otherwise
};

/// The bare model: configuration, instruction stacks, odometer and jump
/// counter, advanced one legal toppling at a time.
class ArwSystem {
public:
    ArwSystem(Configuration config, InstructionTapes tapes, std::uint64_t budget = kDefaultInstructionBudget);

    /// Topples `site` with the next instruction of stream `tag`.
    /// Throws IllegalToppling if the site is stable and BudgetExhausted when
    /// the instruction budget is used up (nothing is consumed in either case).
    ToppleOutcome topple(std::int64_t site, StreamTag tag) {
        SiteState& here = config_[site];
        if (here.is_stable()) [[unlikely]] {
            reject_stable(site);
        }
        if (instructions_ >= budget_) [[unlikely]] {
            throw BudgetExhausted(instructions_);
        }
        const Instruction instr = tapes_.next(site, tag);
        odometer_.increment(site);
        ++instructions_;
        ToppleOutcome out{instr, false, site};
        if (instr == Instruction::Sleep) {
            here.fall_asleep();
        } else {
            const std::int64_t n = config_.ring_size();
            std::int64_t target = site + (instr == Instruction::JumpRight ? 1 : -1);
            target = target == n ? 0 : (target < 0 ? n - 1 : target);
            here.release();
            config_[target].receive();
            ++jumps_;
            out.jumped = true;
            out.target = target;
        }
        if (trace_ != nullptr) [[unlikely]] {
            write_trace(site, tag, instr);
        }
        return out;
    }
    ToppleOutcome topple(std::int64_t site) { return topple(site, tapes_.layout().default_tag(site)); }

    const Configuration& config() const noexcept { return config_; }
    Configuration& mutable_config() noexcept { return config_; }
    const InstructionTapes& tapes() const noexcept { return tapes_; }
    const OdometerMap& odometer() const noexcept { return odometer_; }

    std::uint64_t jumps() const noexcept { return jumps_; }
    std::uint64_t instructions() const noexcept { return instructions_; }
    std::uint64_t budget() const noexcept { return budget_; }
    void set_budget(std::uint64_t budget) noexcept { budget_ = budget; }

    /// Optional per-toppling trace: step, site, instruction, stream_tag,
    /// resulting site state, tab separated. The stream must outlive the system.
    void set_trace(std::ostream* out) noexcept { trace_ = out; }

private:
    [[noreturn]] static void reject_stable(std::int64_t site);
    void write_trace(std::int64_t site, StreamTag tag, Instruction instr) const;

    Configuration config_;
    InstructionTapes tapes_;
    OdometerMap odometer_;
    std::uint64_t jumps_ = 0;
    std::uint64_t instructions_ = 0;
    std::uint64_t budget_;
    std::ostream* trace_ = nullptr;
};

}  // namespace arw
