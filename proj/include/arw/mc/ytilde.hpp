#pragma once

#include <cstdint>
#include <vector>

namespace arw::mc {

/// Reference law of the hole displacement per step, supported on
/// {+1, 0, -1, ..., -v}. With c = 1 / (2 (1 + lambda)) and
/// delta = 1 / (K (1 + lambda)):
///   P(+1) = lambda / (1 + lambda)
///   P(0)  = c + delta
///   P(-k) = c / (k (k + 1))          for 1 <= k < v
///   P(-v) = c / v - delta
struct YtildeDist {
    std::int64_t v = 1;
    double sleep_rate = 0.0;
    std::int64_t block_size = 0;
    double delta = 0.0;
    /// pmf[j] is the probability of the value 1 - j, j = 0..v+1.
    std::vector<double> pmf;

    double probability(std::int64_t value) const noexcept;
    static constexpr std::int64_t value_at(std::size_t j) noexcept { return 1 - static_cast<std::int64_t>(j); }
};

/// Throws ParameterError if v < 1, K < 1, lambda < 0 or P(-v) < 0.
YtildeDist ytilde_pmf(std::int64_t v, double sleep_rate, std::int64_t block_size);

/// Sum of value * probability over the support.
double ytilde_mean(const YtildeDist& dist);

/// lambda / (1 + lambda) - c H_v + v delta, H_v the v-th harmonic number.
double ytilde_mean_closed_form(std::int64_t v, double sleep_rate, std::int64_t block_size);

struct SampleMean {
    std::uint64_t samples = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo mean by inverse-CDF sampling on a counter-based stream.
SampleMean ytilde_sample_mean(const YtildeDist& dist, std::uint64_t samples, std::uint64_t seed);

}  // namespace arw::mc
