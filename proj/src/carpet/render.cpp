#include "arw/carpet/render.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "arw/carpet/engine.hpp"

namespace arw::carpet {

std::string render_state(const CarpetProcedure& procedure) {
    const BlockLayout& lay = procedure.layout();
    const std::int64_t n_sites = lay.ring_size();
    std::vector<int> free_kind(static_cast<std::size_t>(n_sites), 0);  // 1 thawed, 2 frozen
    for (const FreeParticle& f : procedure.free_particles()) {
        int& k = free_kind[static_cast<std::size_t>(f.site)];
        k = std::max(k, f.frozen ? 2 : 1);
    }

    std::string glyphs;
    std::string marks;
    glyphs += "mode " + std::to_string(procedure.mode()) + ", block 0 has label " +
              std::to_string(lay.label(0)) + "\n";
    // Start at the left edge of physical block 0.
    for (std::int64_t i = 0; i < n_sites; ++i) {
        const std::int64_t x = lay.wrap_site(i - lay.half_block());
        const SiteLabels& lab = procedure.labels(x);
        const SiteState s = procedure.config()[x];
        const int fk = free_kind[static_cast<std::size_t>(x)];
        if (fk == 2) {
            glyphs += "□";
        } else if (fk == 1) {
            glyphs += "■";
        } else if (lab.carpet) {
            glyphs += s.is_sleeping() ? "○" : "●";
        } else if (lab.defect) {
            glyphs += ".";
        } else {
            glyphs += " ";
        }
        marks += lab.hole ? '_' : (lay.offset_of(x) == -lay.half_block() ? '|' : ' ');
    }
    return glyphs + "\n" + marks + "\n";
}

}  // namespace arw::carpet
