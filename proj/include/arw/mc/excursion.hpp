#pragma once

#include <cstdint>
#include <vector>

namespace arw::mc {

/// Empirical law of the depth of a walk excursion that starts with a left
/// step. The walker stands on a fully carpeted line, so sleep instructions
/// never take effect and the jump sequence is a simple random walk.
struct ExcursionLaw {
    std::uint64_t samples = 0;             ///< excursions that stepped left first
    std::uint64_t right_first = 0;         ///< discarded excursions
    std::vector<std::uint64_t> counts;     ///< counts[k-1]: leftmost site exactly -k
    std::uint64_t deeper = 0;              ///< leftmost site below -max_depth

    std::int64_t max_depth() const noexcept { return static_cast<std::int64_t>(counts.size()); }
    double frequency(std::int64_t k) const noexcept;
    /// 1 / (k (k + 1)).
    static double theoretical(std::int64_t k) noexcept;
    /// Binomial standard error of frequency(k) around the theoretical value.
    double sigma(std::int64_t k) const noexcept;
};

/// Collects `samples` left-first excursions, each stopped on return to 0 or
/// on reaching -(max_depth + 1). Instructions use the jump/sleep law with
/// sleep rate `sleep_rate`.
ExcursionLaw excursion_min_law(std::uint64_t samples, std::uint64_t seed, double sleep_rate = 1.0,
                               std::int64_t max_depth = 20);

}  // namespace arw::mc
