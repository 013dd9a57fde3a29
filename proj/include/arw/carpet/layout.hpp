#pragma once

#include <cstdint>

namespace arw::carpet {

/// Block geometry of the ring: n + 2 blocks of K = a^2 sites, block p
/// covering [pK - K/2, pK + K/2). Physical blocks never move; the procedure
/// addresses them through labels that rotate between modes.
class BlockLayout {
public:
    /// Throws ParameterError unless n and a are even and positive.
    static BlockLayout build(std::int64_t n, std::int64_t a);

    std::int64_t n() const noexcept { return n_; }
    std::int64_t a() const noexcept { return a_; }
    std::int64_t block_size() const noexcept { return a_ * a_; }
    std::int64_t half_block() const noexcept { return block_size() / 2; }
    std::int64_t block_count() const noexcept { return n_ + 2; }
    std::int64_t ring_size() const noexcept { return block_count() * block_size(); }

    std::int64_t wrap_site(std::int64_t site) const noexcept { return mod(site, ring_size()); }
    std::int64_t wrap_block(std::int64_t block) const noexcept { return mod(block, block_count()); }

    /// Physical block containing `site`.
    std::int64_t block_of(std::int64_t site) const noexcept {
        return wrap_block(floor_div(wrap_site(site) + half_block(), block_size()));
    }
    /// Offset of `site` from the centre of its block, in [-K/2, K/2).
    std::int64_t offset_of(std::int64_t site) const noexcept {
        return mod(wrap_site(site) + half_block(), block_size()) - half_block();
    }
    /// Site at `offset` from the centre of physical block `block`.
    std::int64_t site_of(std::int64_t block, std::int64_t offset) const noexcept {
        return wrap_site(block * block_size() + offset);
    }
    /// Signed displacement of `site` from the centre of physical block `block`,
    /// reduced into [-N/2, N/2).
    std::int64_t displacement(std::int64_t block, std::int64_t site) const noexcept {
        const std::int64_t n = ring_size();
        return mod(site - block * block_size() + n / 2, n) - n / 2;
    }

    /// Labels: label i names physical block (i + rotation) mod (n + 2).
    std::int64_t physical(std::int64_t label) const noexcept { return wrap_block(label + rotation_); }
    std::int64_t label(std::int64_t physical_block) const noexcept { return wrap_block(physical_block - rotation_); }
    std::int64_t rotation() const noexcept { return rotation_; }
    /// Rotates labels by n/2 + 1: the current sources become the sinks.
    void relabel() noexcept { rotation_ = wrap_block(rotation_ + n_ / 2 + 1); }

    friend bool operator==(const BlockLayout&, const BlockLayout&) = default;

private:
    BlockLayout(std::int64_t n, std::int64_t a) noexcept : n_(n), a_(a) {}

    static std::int64_t mod(std::int64_t x, std::int64_t m) noexcept {
        const std::int64_t r = x % m;
        return r < 0 ? r + m : r;
    }
    static std::int64_t floor_div(std::int64_t x, std::int64_t m) noexcept {
        return (x - mod(x, m)) / m;
    }

    std::int64_t n_;
    std::int64_t a_;
    std::int64_t rotation_ = 0;
};

inline BlockLayout build_layout(std::int64_t n, std::int64_t a) { return BlockLayout::build(n, a); }

}  // namespace arw::carpet
