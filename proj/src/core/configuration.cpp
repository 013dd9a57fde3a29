#include "arw/core/configuration.hpp"

#include <algorithm>

#include "arw/core/errors.hpp"
#include "arw/core/philox.hpp"

namespace arw {

SiteState SiteState::active(std::int32_t count) {
    if (count < 1) {
        throw ParameterError("active site needs a positive particle count");
    }
    return SiteState{count};
}

std::string SiteState::to_string() const {
    switch (kind()) {
        case Kind::Empty:
            return "0";
        case Kind::Sleeping:
            return "s";
        case Kind::Active:
            break;
    }
    return std::to_string(value_);
}

Configuration::Configuration(std::int64_t ring_size) {
    if (ring_size < 1) {
        throw ParameterError("ring size must be positive");
    }
    sites_.resize(static_cast<std::size_t>(ring_size));
}

Configuration::Configuration(std::vector<SiteState> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) {
        throw ParameterError("ring size must be positive");
    }
}

bool Configuration::is_stable() const noexcept {
    return std::all_of(sites_.begin(), sites_.end(), [](SiteState s) { return s.is_stable(); });
}

std::int64_t Configuration::total_particles() const noexcept {
    std::int64_t total = 0;
    for (SiteState s : sites_) {
        total += s.particles();
    }
    return total;
}

std::int64_t Configuration::unstable_sites() const noexcept {
    return std::count_if(sites_.begin(), sites_.end(), [](SiteState s) { return !s.is_stable(); });
}

std::uint64_t Configuration::digest() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (SiteState s : sites_) {
        const auto v = static_cast<std::uint32_t>(s.is_sleeping() ? 0xffffffffu : static_cast<std::uint32_t>(s.particles()));
        for (int b = 0; b < 4; ++b) {
            h ^= (v >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

Configuration Configuration::bernoulli(std::int64_t ring_size, double density, std::uint64_t seed) {
    if (!(density >= 0.0 && density <= 1.0)) {
        throw ParameterError("density must lie in [0, 1]");
    }
    Configuration config(ring_size);
    for (std::int64_t x = 0; x < ring_size; ++x) {
        const double u = Philox4x32::uniform(seed, 0, static_cast<std::uint32_t>(x),
                                             static_cast<std::uint32_t>(StreamDomain::InitialConfiguration));
        if (u < density) {
            config[x] = SiteState::active(1);
        }
    }
    return config;
}

}  // namespace arw
