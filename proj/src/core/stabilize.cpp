#include "arw/core/stabilize.hpp"

#include <bit>
#include <vector>

#include "arw/core/errors.hpp"
#include "arw/core/philox.hpp"

namespace arw {

namespace {

/// Bitset over sites, with O(N/64) lowest/highest/k-th queries.
class SiteSet {
public:
    explicit SiteSet(std::int64_t n) : words_(static_cast<std::size_t>((n + 63) / 64), 0), size_(n) {}

    void assign(std::int64_t site, bool on) noexcept {
        const auto w = static_cast<std::size_t>(site >> 6);
        const std::uint64_t bit = std::uint64_t{1} << (site & 63);
        count_ += (on ? 1 : 0) - ((words_[w] & bit) ? 1 : 0);
        words_[w] = on ? (words_[w] | bit) : (words_[w] & ~bit);
    }
    bool empty() const noexcept { return count_ == 0; }
    std::int64_t count() const noexcept { return count_; }

    std::int64_t lowest() const noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] != 0) return static_cast<std::int64_t>(w * 64) + std::countr_zero(words_[w]);
        }
        return -1;
    }
    std::int64_t highest() const noexcept {
        for (std::size_t w = words_.size(); w-- > 0;) {
            if (words_[w] != 0) return static_cast<std::int64_t>(w * 64) + 63 - std::countl_zero(words_[w]);
        }
        return -1;
    }
    std::int64_t nth(std::int64_t k) const noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            const int c = std::popcount(words_[w]);
            if (k < c) {
                std::uint64_t word = words_[w];
                for (; k > 0; --k) word &= word - 1;
                return static_cast<std::int64_t>(w * 64) + std::countr_zero(word);
            }
            k -= c;
        }
        return -1;
    }

private:
    std::vector<std::uint64_t> words_;
    std::int64_t size_;
    std::int64_t count_ = 0;
};

template <class Eligible>
StabilizeRun run_until_clear(ArwSystem& system, TopplingPolicy policy, Eligible eligible) {
    const Configuration& config = system.config();
    const std::int64_t n = config.ring_size();
    SiteSet pending(n);
    for (std::int64_t x = 0; x < n; ++x) {
        pending.assign(x, eligible(config[x]));
    }
    CounterStream picker(policy.seed, 0);
    const std::uint64_t jumps_before = system.jumps();

    while (!pending.empty()) {
        std::int64_t site = -1;
        switch (policy.kind) {
            case TopplingPolicy::Kind::LowestFirst:
                site = pending.lowest();
                break;
            case TopplingPolicy::Kind::HighestFirst:
                site = pending.highest();
                break;
            case TopplingPolicy::Kind::Random:
                site = pending.nth(static_cast<std::int64_t>(picker.next_below(static_cast<std::uint64_t>(pending.count()))));
                break;
        }
        ToppleOutcome out{};
        try {
            out = system.topple(site);
        } catch (const BudgetExhausted&) {
            return {StabilizeStatus::BudgetExhausted, system.jumps() - jumps_before};
        }
        pending.assign(site, eligible(config[site]));
        if (out.jumped) {
            pending.assign(out.target, eligible(config[out.target]));
        }
    }
    return {StabilizeStatus::Stable, system.jumps() - jumps_before};
}

}  // namespace

StabilizeRun stabilize(ArwSystem& system, TopplingPolicy policy) {
    return run_until_clear(system, policy, [](SiteState s) { return s.is_active(); });
}

StabilizeResult stabilize_greedy(const Configuration& config, const InstructionTapes& tapes, std::uint64_t budget,
                                 TopplingPolicy policy) {
    ArwSystem system(config, tapes, budget);
    const StabilizeRun run = stabilize(system, policy);
    return {run.status, system.config(), system.odometer(), run.jumps};
}

AbelianVerdict check_abelian(const Configuration& config, const InstructionTapes& tapes, TopplingPolicy order_a,
                             TopplingPolicy order_b, std::uint64_t budget) {
    const StabilizeResult a = stabilize_greedy(config, tapes, budget, order_a);
    const StabilizeResult b = stabilize_greedy(config, tapes, budget, order_b);
    if (a.status != StabilizeStatus::Stable || b.status != StabilizeStatus::Stable) {
        return AbelianVerdict::Inconclusive;
    }
    return (a.config == b.config && a.odometer == b.odometer) ? AbelianVerdict::Equal : AbelianVerdict::Different;
}

StabilizeStatus preprocess_multi(ArwSystem& system) {
    return run_until_clear(system, TopplingPolicy::lowest_first(), [](SiteState s) { return s.active_count() >= 2; })
        .status;
}

}  // namespace arw
