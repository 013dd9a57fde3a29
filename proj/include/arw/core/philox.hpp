#pragma once

#include <array>
#include <cstdint>

namespace arw {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Stateless: every output block is a pure function of (key, counter), so a
/// stream can be indexed at any position without replaying its prefix.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

    static constexpr Key key_from_seed(std::uint64_t seed) noexcept {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }

    /// 64 random bits for counter (index, stream_a, stream_b).
    static constexpr std::uint64_t bits64(std::uint64_t seed, std::uint64_t index, std::uint32_t stream_a,
                                          std::uint32_t stream_b) noexcept {
        Counter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream_a,
                    stream_b};
        Counter out = generate(ctr, key_from_seed(seed));
        return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    static constexpr double uniform(std::uint64_t seed, std::uint64_t index, std::uint32_t stream_a,
                                    std::uint32_t stream_b) noexcept {
        return static_cast<double>(bits64(seed, index, stream_a, stream_b) >> 11) * 0x1.0p-53;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Stream identifiers used as the fourth counter word. Keeps the tapes, the
/// initial-configuration draw and seed derivation on disjoint substreams.
enum class StreamDomain : std::uint32_t {
    TapeSingle = 0,
    TapeLeft = 1,
    TapeRight = 2,
    InitialConfiguration = 3,
    SeedDerivation = 4,
    Auxiliary = 5,
};

/// Derive an independent child seed from (parent, a, b).
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b) noexcept {
    return Philox4x32::bits64(parent, a, static_cast<std::uint32_t>(b),
                              static_cast<std::uint32_t>(StreamDomain::SeedDerivation));
}

/// Sequential uniform source on one Philox substream. Used where a plain
/// running sequence is all that is needed (policies, samplers).
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint32_t stream) noexcept : seed_(seed), stream_(stream) {}

    std::uint64_t next_bits() noexcept {
        return Philox4x32::bits64(seed_, index_++, stream_, static_cast<std::uint32_t>(StreamDomain::Auxiliary));
    }
    double next_uniform() noexcept { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [0, bound) by rejection.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next_bits();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::uint64_t seed_;
    std::uint32_t stream_;
    std::uint64_t index_ = 0;
};

}  // namespace arw
