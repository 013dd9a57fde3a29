#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "arw/core/philox.hpp"

namespace arw {

enum class Instruction : std::uint8_t { JumpRight, JumpLeft, Sleep };

/// Which of a site's instruction stacks to read. Corridor sites of a block
/// layout carry an L and an R stack; every other site carries a single one.
enum class StreamTag : std::uint8_t { Single = 0, Left = 1, Right = 2 };

std::string_view to_string(Instruction instr) noexcept;
std::string_view to_string(StreamTag tag) noexcept;

constexpr bool is_jump(Instruction instr) noexcept { return instr != Instruction::Sleep; }

/// Which stacks each site owns.
///
/// Uniform: one stack per site. Blocks(K, a): a site x with x mod K in [0, a]
/// lies in a hole zone and owns a Single stack (the block's own hot particles)
/// plus a Right stack (hot particles arriving from the next block while this
/// block is defective); every other site is a corridor site with Left and Right
/// stacks.
class StreamLayout {
public:
    static StreamLayout uniform() noexcept { return StreamLayout{0, 0}; }
    static StreamLayout blocks(std::int64_t block_size, std::int64_t hole_span);

    bool is_uniform() const noexcept { return block_size_ == 0; }
    bool is_corridor(std::int64_t site) const noexcept {
        return !is_uniform() && (site % block_size_) > hole_span_;
    }
    bool accepts(std::int64_t site, StreamTag tag) const noexcept {
        if (is_uniform()) return tag == StreamTag::Single;
        if (is_corridor(site)) return tag != StreamTag::Single;
        return tag != StreamTag::Left;
    }
    /// Stream used by plain (label-free) toppling of a site.
    StreamTag default_tag(std::int64_t site) const noexcept {
        return is_corridor(site) ? StreamTag::Left : StreamTag::Single;
    }

    friend bool operator==(const StreamLayout&, const StreamLayout&) = default;

private:
    StreamLayout(std::int64_t k, std::int64_t a) noexcept : block_size_(k), hole_span_(a) {}
    std::int64_t block_size_;
    std::int64_t hole_span_;
};

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Lazily sampled instruction stacks, one counter-indexed substream per
/// (site, tag). Each stream has a 64-bit key drawn from Philox(seed; site,
/// tag); 64-bit word j of the stream is mix64(key + (j + 1) * golden) and
/// carries instructions 2j (low half) and 2j + 1 (high half). Instruction k
/// is therefore a pure function of (seed, site, tag, k); the cursors record
/// how far each stream was consumed.
class InstructionTapes {
public:
    InstructionTapes(std::uint64_t seed, double sleep_rate, std::int64_t ring_size,
                     StreamLayout layout = StreamLayout::uniform());

    /// Consumes and returns the next instruction of stream (site, tag).
    /// Throws UsageError if the site does not own that stream.
    Instruction next(std::int64_t site, StreamTag tag) {
        if (static_cast<std::uint64_t>(site) >= static_cast<std::uint64_t>(ring_size()) ||
            !layout_.accepts(site, tag)) [[unlikely]] {
            reject(site, tag);
        }
        Stream& s = streams_[slot(site, tag)];
        const Instruction instr = draw(s.key, s.cursor);
        ++s.cursor;
        ++consumed_;
        return instr;
    }

    /// The instruction at an arbitrary position of a stream, without consuming.
    Instruction peek(std::int64_t site, StreamTag tag, std::uint64_t index) const;

    std::uint64_t cursor(std::int64_t site, StreamTag tag) const noexcept { return streams_[slot(site, tag)].cursor; }
    std::uint64_t consumed() const noexcept { return consumed_; }

    std::uint64_t seed() const noexcept { return seed_; }
    double sleep_rate() const noexcept { return sleep_rate_; }
    std::int64_t ring_size() const noexcept { return static_cast<std::int64_t>(streams_.size() / 3); }
    const StreamLayout& layout() const noexcept { return layout_; }

    /// Same seed and layout, all cursors back at zero.
    InstructionTapes fresh_copy() const { return InstructionTapes(seed_, sleep_rate_, ring_size(), layout_); }

    /// Probability of each jump direction, 1 / (2 (1 + lambda)).
    double jump_probability() const noexcept { return 1.0 / (2.0 * (1.0 + sleep_rate_)); }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

    struct Stream {
        std::uint64_t key = 0;
        std::uint64_t cursor = 0;
    };

    std::size_t slot(std::int64_t site, StreamTag tag) const noexcept {
        return static_cast<std::size_t>(site) * 3 + static_cast<std::size_t>(tag);
    }
    Instruction draw(std::uint64_t key, std::uint64_t index) const noexcept {
        const std::uint64_t bits = mix64(key + ((index >> 1) + 1) * kGolden);
        const auto word = static_cast<std::uint32_t>(bits >> ((index & 1u) * 32));
        if (word < right_below_) return Instruction::JumpRight;
        if (word < left_below_) return Instruction::JumpLeft;
        return Instruction::Sleep;
    }
    [[noreturn]] void reject(std::int64_t site, StreamTag tag) const;

    std::uint64_t seed_;
    double sleep_rate_;
    // A 32-bit draw w decodes to JumpRight if w < right_below_, JumpLeft if
    // w < left_below_, Sleep otherwise.
    std::uint64_t right_below_;
    std::uint64_t left_below_;
    StreamLayout layout_;
    std::vector<Stream> streams_;
    std::uint64_t consumed_ = 0;
};

}  // namespace arw
