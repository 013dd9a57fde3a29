#include "arw/mc/ytilde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arw/core/errors.hpp"
#include "arw/core/philox.hpp"

namespace arw::mc {

double YtildeDist::probability(std::int64_t value) const noexcept {
    const std::int64_t j = 1 - value;
    if (j < 0 || j >= static_cast<std::int64_t>(pmf.size())) return 0.0;
    return pmf[static_cast<std::size_t>(j)];
}

YtildeDist ytilde_pmf(std::int64_t v, double sleep_rate, std::int64_t block_size) {
    if (v < 1) throw ParameterError("v must be at least 1");
    if (block_size < 1) throw ParameterError("block size K must be positive");
    if (!(sleep_rate >= 0.0) || !std::isfinite(sleep_rate)) throw ParameterError("sleep rate must be finite and >= 0");

    const double c = 1.0 / (2.0 * (1.0 + sleep_rate));
    const double delta = 1.0 / (static_cast<double>(block_size) * (1.0 + sleep_rate));
    YtildeDist d{v, sleep_rate, block_size, delta, {}};
    d.pmf.assign(static_cast<std::size_t>(v + 2), 0.0);
    d.pmf[0] = sleep_rate / (1.0 + sleep_rate);
    d.pmf[1] = c + delta;
    for (std::int64_t k = 1; k < v; ++k) {
        d.pmf[static_cast<std::size_t>(k + 1)] = c / static_cast<double>(k * (k + 1));
    }
    // c - delta - sum_{k<v} c/(k(k+1)) telescopes to c/v - delta.
    const double tail = c / static_cast<double>(v) - delta;
    if (tail < 0.0) {
        throw ParameterError("P(-v) would be negative for v=" + std::to_string(v) + ", K=" +
                             std::to_string(block_size) + " (needs 2v <= K)");
    }
    d.pmf[static_cast<std::size_t>(v + 1)] = tail;
    return d;
}

double ytilde_mean(const YtildeDist& dist) {
    double mean = 0.0;
    for (std::size_t j = 0; j < dist.pmf.size(); ++j) {
        mean += static_cast<double>(YtildeDist::value_at(j)) * dist.pmf[j];
    }
    return mean;
}

double ytilde_mean_closed_form(std::int64_t v, double sleep_rate, std::int64_t block_size) {
    const YtildeDist d = ytilde_pmf(v, sleep_rate, block_size);
    const double c = 1.0 / (2.0 * (1.0 + sleep_rate));
    double harmonic = 0.0;
    for (std::int64_t k = 1; k <= v; ++k) harmonic += 1.0 / static_cast<double>(k);
    return sleep_rate / (1.0 + sleep_rate) - c * harmonic + static_cast<double>(v) * d.delta;
}

SampleMean ytilde_sample_mean(const YtildeDist& dist, std::uint64_t samples, std::uint64_t seed) {
    std::vector<double> cdf(dist.pmf.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < dist.pmf.size(); ++j) {
        acc += dist.pmf[j];
        cdf[j] = acc;
    }
    cdf.back() = 1.0;

    CounterStream stream(seed, 0);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double u = stream.next_uniform();
        std::size_t j = 0;
        while (u >= cdf[j]) ++j;
        const double x = static_cast<double>(YtildeDist::value_at(j));
        sum += x;
        sum_sq += x * x;
    }
    SampleMean out;
    out.samples = samples;
    if (samples == 0) return out;
    const double n = static_cast<double>(samples);
    out.mean = sum / n;
    const double var = samples > 1 ? (sum_sq - n * out.mean * out.mean) / (n - 1.0) : 0.0;
    out.std_error = std::sqrt(std::max(var, 0.0) / n);
    return out;
}

}  // namespace arw::mc
