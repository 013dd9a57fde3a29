#include <algorithm>
#include <vector>

#include "arw/carpet/engine.hpp"

namespace arw::carpet {

std::vector<Property> CarpetProcedure::assert_properties() const {
    const BlockLayout& lay = layout_;
    const Configuration& config = system_.config();
    const std::int64_t a = lay.a();
    const std::int64_t k = lay.block_size();
    const std::int64_t half = lay.half_block();
    const std::int64_t blocks = lay.block_count();

    std::vector<bool> bad(static_cast<std::size_t>(Property::Bookkeeping) + 1, false);
    auto flag = [&](Property p) { bad[static_cast<std::size_t>(p)] = true; };

    std::vector<std::int64_t> free_at(static_cast<std::size_t>(lay.ring_size()), 0);
    std::vector<std::int64_t> frozen_in(static_cast<std::size_t>(blocks), 0);
    for (const FreeParticle& f : free_) {
        if (f.site < 0 || f.site >= lay.ring_size()) {
            flag(Property::Bookkeeping);
            continue;
        }
        ++free_at[static_cast<std::size_t>(f.site)];
        const std::int64_t offset = lay.offset_of(f.site);
        const bool is_hot = hot_ && *hot_ == f.id;
        if (!is_hot && offset != 0 && offset != a) flag(Property::P7);
        if (f.frozen) {
            ++frozen_in[static_cast<std::size_t>(lay.block_of(f.site))];
            if (is_hot) flag(Property::P10);
        }
    }
    if (hot_ && std::none_of(free_.begin(), free_.end(), [&](const FreeParticle& f) { return f.id == *hot_; })) {
        flag(Property::P10);
    }

    for (std::int64_t x = 0; x < lay.ring_size(); ++x) {
        const SiteLabels& lab = labels(x);
        const SiteState s = config[x];
        const std::int64_t here = free_at[static_cast<std::size_t>(x)];
        if (s.particles() != (lab.carpet ? 1 : 0) + here) flag(Property::Bookkeeping);
        if (lab.defect && (lab.hole || lab.carpet || !s.is_empty())) flag(Property::Bookkeeping);
        if (!lab.hole && !lab.defect && !lab.carpet) flag(Property::P2);
        if (here > 0 && !s.is_active()) flag(Property::P6);
    }

    for (std::int64_t p = 0; p < blocks; ++p) {
        std::int64_t holes = 0;
        std::int64_t first_hole = k;
        std::int64_t block_defects = 0;
        for (std::int64_t v = -half; v < half; ++v) {
            const SiteLabels& lab = labels(lay.site_of(p, v));
            if (lab.hole) {
                ++holes;
                if (v < 0 || v > a) flag(Property::P1);
                first_hole = std::min(first_hole, v);
            }
            if (lab.defect) ++block_defects;
        }
        if (holes != 1) flag(Property::P1);
        if (block_defects != defects(p)) flag(Property::Bookkeeping);
        if (holes == 0) continue;
        if (block_defects > 0 && first_hole != 0) flag(Property::P4);
        for (std::int64_t v = first_hole + 1; v < a; ++v) {
            const std::int64_t x = lay.site_of(p, v);
            if (labels(x).carpet && !config[x].is_active()) flag(Property::P5);
        }
        const std::int64_t frozen = frozen_in[static_cast<std::size_t>(p)];
        if (frozen > 1) flag(Property::P8);
        bool frozen_at_top = false;
        for (const FreeParticle& f : free_) {
            if (f.frozen && f.site == lay.site_of(p, a)) frozen_at_top = true;
        }
        if ((frozen > 0) != (first_hole == a) || (frozen > 0 && !frozen_at_top)) flag(Property::P9);
    }

    std::vector<Property> out;
    for (std::size_t i = 0; i < bad.size(); ++i) {
        if (bad[i]) out.push_back(static_cast<Property>(i));
    }
    return out;
}

}  // namespace arw::carpet
