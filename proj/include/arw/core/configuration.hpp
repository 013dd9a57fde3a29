#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace arw {

/// Occupancy of one site: empty, one sleeping particle, or k >= 1 active particles.
class SiteState {
public:
    enum class Kind : std::uint8_t { Empty, Sleeping, Active };

    constexpr SiteState() noexcept = default;

    static constexpr SiteState empty() noexcept { return SiteState{0}; }
    static constexpr SiteState sleeping() noexcept { return SiteState{kSleeping}; }
    static SiteState active(std::int32_t count);

    constexpr Kind kind() const noexcept {
        return value_ == 0 ? Kind::Empty : (value_ == kSleeping ? Kind::Sleeping : Kind::Active);
    }
    constexpr bool is_empty() const noexcept { return value_ == 0; }
    constexpr bool is_sleeping() const noexcept { return value_ == kSleeping; }
    constexpr bool is_active() const noexcept { return value_ > 0; }
    /// Stable means empty or sleeping.
    constexpr bool is_stable() const noexcept { return value_ <= 0; }
    /// Number of particles, a sleeping site counting as one.
    constexpr std::int32_t particles() const noexcept { return value_ == kSleeping ? 1 : value_; }
    /// Active particle count (0 unless active).
    constexpr std::int32_t active_count() const noexcept { return value_ > 0 ? value_ : 0; }

    /// Adds one arriving active particle: 0 -> 1, s -> 2, k -> k+1.
    constexpr void receive() noexcept { value_ = value_ == kSleeping ? 2 : value_ + 1; }
    /// Removes one active particle. Precondition: is_active().
    constexpr void release() noexcept { --value_; }
    /// Active(1) -> Sleeping; identity otherwise.
    constexpr bool fall_asleep() noexcept {
        if (value_ == 1) {
            value_ = kSleeping;
            return true;
        }
        return false;
    }

    std::string to_string() const;

    friend constexpr bool operator==(SiteState, SiteState) noexcept = default;

private:
    static constexpr std::int32_t kSleeping = -1;
    explicit constexpr SiteState(std::int32_t v) noexcept : value_(v) {}
    std::int32_t value_ = 0;
};

/// Particle configuration on the ring Z_N.
class Configuration {
public:
    explicit Configuration(std::int64_t ring_size);
    Configuration(std::vector<SiteState> sites);

    std::int64_t ring_size() const noexcept { return static_cast<std::int64_t>(sites_.size()); }

    SiteState& operator[](std::int64_t site) noexcept { return sites_[static_cast<std::size_t>(site)]; }
    SiteState operator[](std::int64_t site) const noexcept { return sites_[static_cast<std::size_t>(site)]; }

    std::span<const SiteState> sites() const noexcept { return sites_; }

    /// Index reduction into [0, N).
    std::int64_t wrap(std::int64_t site) const noexcept {
        const std::int64_t n = ring_size();
        const std::int64_t r = site % n;
        return r < 0 ? r + n : r;
    }

    bool is_stable(std::int64_t site) const noexcept { return (*this)[site].is_stable(); }
    bool is_stable() const noexcept;
    std::int64_t total_particles() const noexcept;
    std::int64_t unstable_sites() const noexcept;

    /// FNV-1a digest of the site states, for compact reporting.
    std::uint64_t digest() const noexcept;

    /// I.i.d. Bernoulli(density) occupancy, one active particle per occupied site.
    static Configuration bernoulli(std::int64_t ring_size, double density, std::uint64_t seed);

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::vector<SiteState> sites_;
};

}  // namespace arw
