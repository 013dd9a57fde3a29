#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arw/carpet/engine.hpp"
#include "arw/carpet/flow_invariance.hpp"
#include "arw/carpet/layout.hpp"
#include "arw/carpet/render.hpp"
#include "doctest.h"

using namespace arw;
using namespace arw::carpet;

namespace {

CarpetProcedure make_proc(const BlockLayout& lay, Configuration config, std::uint64_t seed = 1,
                          double sleep_rate = 0.5) {
    InstructionTapes tapes(seed, sleep_rate, lay.ring_size(), StreamLayout::blocks(lay.block_size(), lay.a()));
    return CarpetProcedure(lay, std::move(config), std::move(tapes));
}

Configuration full(const BlockLayout& lay) {
    Configuration c(lay.ring_size());
    for (std::int64_t x = 0; x < lay.ring_size(); ++x) c[x] = SiteState::active(1);
    return c;
}

bool contains(const std::vector<Property>& v, Property p) { return std::find(v.begin(), v.end(), p) != v.end(); }

}  // namespace

TEST_CASE("layout arithmetic") {
    const BlockLayout lay = build_layout(4, 4);
    CHECK(lay.block_size() == 16);
    CHECK(lay.ring_size() == 96);
    CHECK(lay.block_count() == 6);
    // Block 0 covers [-8, 8).
    for (std::int64_t x = -8; x < 8; ++x) CHECK(lay.block_of(x) == 0);
    CHECK(lay.block_of(8) == 1);
    CHECK(lay.block_of(-9) == 5);
    CHECK(lay.offset_of(-8) == -8);
    CHECK(lay.offset_of(7) == 7);
    CHECK(lay.site_of(0, -8) == 88);
    CHECK(lay.site_of(2, 4) == 36);
    CHECK(lay.displacement(1, 0) == -16);
    CHECK(lay.displacement(5, 0) == 16);

    const BlockLayout small = build_layout(2, 2);
    CHECK(small.block_size() == 4);
    CHECK(small.ring_size() == 16);

    CHECK_THROWS_AS(build_layout(3, 4), ParameterError);
    CHECK_THROWS_AS(build_layout(4, 3), ParameterError);
    CHECK_THROWS_AS(build_layout(0, 4), ParameterError);
}

TEST_CASE("blocks partition the ring") {
    for (std::int64_t n : {2, 4, 6}) {
        for (std::int64_t a : {2, 4, 6}) {
            const BlockLayout lay = build_layout(n, a);
            std::vector<int> hits(static_cast<std::size_t>(lay.ring_size()), 0);
            for (std::int64_t p = 0; p < lay.block_count(); ++p) {
                for (std::int64_t v = -lay.half_block(); v < lay.half_block(); ++v) {
                    const std::int64_t x = lay.site_of(p, v);
                    ++hits[static_cast<std::size_t>(x)];
                    REQUIRE(lay.block_of(x) == p);
                    REQUIRE(lay.offset_of(x) == v);
                }
            }
            CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
        }
    }
}

TEST_CASE("relabelling") {
    BlockLayout lay = build_layout(4, 4);
    CHECK(lay.label(3) == 3);
    lay.relabel();
    CHECK(lay.label(3) == 0);  // old source n/2 + 1 becomes sink 0
    CHECK(lay.label(2) == 5);  // old source n/2 becomes sink n + 1
    CHECK(lay.label(0) == 3);
    CHECK(lay.label(5) == 2);
    lay.relabel();
    CHECK(lay.rotation() == 0);

    for (std::int64_t n : {2, 6, 8}) {
        BlockLayout l = build_layout(n, 4);
        l.relabel();
        const std::set<std::int64_t> sinks{l.physical(0), l.physical(n + 1)};
        CHECK(sinks == std::set<std::int64_t>{n / 2, n / 2 + 1});
    }
}

TEST_CASE("relabel leaves the physical state alone") {
    const BlockLayout lay = build_layout(4, 4);
    CarpetProcedure proc = CarpetProcedure::init_first_mode(0.9, lay, 1.0, 3);
    const Configuration before = proc.config();
    std::vector<SiteLabels> labels;
    for (std::int64_t x = 0; x < lay.ring_size(); ++x) labels.push_back(proc.labels(x));
    proc.relabel_blocks();
    CHECK(proc.config() == before);
    for (std::int64_t x = 0; x < lay.ring_size(); ++x) CHECK(proc.labels(x) == labels[static_cast<std::size_t>(x)]);
    CHECK(proc.mode() == 1);
}

TEST_CASE("initial labelling") {
    const BlockLayout lay = build_layout(4, 4);
    SUBCASE("fully occupied: no defects, one free particle per block") {
        CarpetProcedure proc = make_proc(lay, full(lay));
        CHECK(proc.defect_count() == 0);
        CHECK(proc.free_count() == lay.block_count());
        for (const FreeParticle& f : proc.free_particles()) {
            CHECK(lay.offset_of(f.site) == 0);
            CHECK_FALSE(f.frozen);
        }
        CHECK(proc.assert_properties().empty());
    }
    SUBCASE("empty iK is a vacant hole, not a defect") {
        Configuration c = full(lay);
        c[lay.site_of(2, 0)] = SiteState::empty();
        CarpetProcedure proc = make_proc(lay, c);
        CHECK(proc.labels(lay.site_of(2, 0)).hole);
        CHECK_FALSE(proc.labels(lay.site_of(2, 0)).defect);
        CHECK(proc.defect_count() == 0);
        CHECK(proc.free_count() == lay.block_count() - 1);
    }
    SUBCASE("Bernoulli start satisfies every property") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            CarpetProcedure proc = CarpetProcedure::init_first_mode(0.9, lay, 0.5, seed);
            REQUIRE(proc.assert_properties().empty());
            std::int64_t carpet = 0;
            for (std::int64_t x = 0; x < lay.ring_size(); ++x) carpet += proc.labels(x).carpet;
            REQUIRE(carpet + proc.free_count() == proc.config().total_particles());
            REQUIRE(carpet + proc.defect_count() == lay.ring_size() - lay.block_count());
        }
    }
    SUBCASE("rejected inputs") {
        CHECK_THROWS_AS(make_proc(build_layout(4, 2), full(build_layout(4, 2))), ParameterError);
        Configuration c = full(lay);
        c[5] = SiteState::active(2);
        CHECK_THROWS_AS(make_proc(lay, c), ParameterError);
        CHECK_THROWS_AS(CarpetProcedure::init_first_mode(1.0, lay, 0.5, 1), ParameterError);
    }
}

TEST_CASE("choose_hot") {
    const BlockLayout lay = build_layout(4, 4);
    SUBCASE("smallest eligible label") {
        const CarpetProcedure proc = make_proc(lay, full(lay));
        const auto hot = proc.choose_hot();
        REQUIRE(hot);
        CHECK(hot->label == 1);
        CHECK(hot->site == lay.site_of(1, 0));
    }
    SUBCASE("a defect makes a block ineligible") {
        Configuration c = full(lay);
        c[lay.site_of(1, 5)] = SiteState::empty();
        const CarpetProcedure proc = make_proc(lay, c);
        const auto hot = proc.choose_hot();
        REQUIRE(hot);
        CHECK(hot->label == 2);
    }
    SUBCASE("sinks are never chosen") {
        Configuration c = full(lay);
        for (std::int64_t i = 1; i <= lay.n(); ++i) c[lay.site_of(i, 0)] = SiteState::empty();
        const CarpetProcedure proc = make_proc(lay, c);
        CHECK(proc.free_count() == 2);
        CHECK_FALSE(proc.choose_hot());
    }
    SUBCASE("iK is preferred over iK + a") {
        Configuration c = full(lay);
        CarpetProcedure proc = make_proc(lay, c);
        // Park an extra free particle on the carpet at 1K + a.
        const std::int64_t top = lay.site_of(1, lay.a());
        proc.mutable_config()[top].receive();
        proc.mutable_free_particles().push_back(FreeParticle{1000, top, false});
        REQUIRE(proc.assert_properties().empty());
        CHECK(proc.choose_hot()->site == lay.site_of(1, 0));
    }
}

TEST_CASE("property mutations are detected") {
    const BlockLayout lay = build_layout(4, 4);
    SUBCASE("second hole") {
        CarpetProcedure proc = make_proc(lay, full(lay));
        proc.mutable_labels(lay.site_of(2, 3)).hole = true;
        CHECK(proc.assert_properties() == std::vector<Property>{Property::P1});
    }
    SUBCASE("hole outside [iK, iK + a]") {
        CarpetProcedure proc = make_proc(lay, full(lay));
        proc.mutable_labels(lay.site_of(2, 0)).hole = false;
        proc.mutable_labels(lay.site_of(2, -1)).hole = true;
        CHECK(contains(proc.assert_properties(), Property::P1));
    }
    SUBCASE("frozen particle at iK + a with the hole at iK") {
        CarpetProcedure proc = make_proc(lay, full(lay));
        const std::int64_t top = lay.site_of(2, lay.a());
        proc.mutable_config()[top].receive();
        proc.mutable_free_particles().push_back(FreeParticle{1000, top, true});
        CHECK(proc.assert_properties() == std::vector<Property>{Property::P9});
    }
    SUBCASE("unlabelled occupied site") {
        CarpetProcedure proc = make_proc(lay, full(lay));
        proc.mutable_labels(lay.site_of(3, 6)).carpet = false;
        const auto bad = proc.assert_properties();
        CHECK(contains(bad, Property::P2));
    }
    SUBCASE("sleeping free particle") {
        CarpetProcedure proc = make_proc(lay, full(lay));
        proc.mutable_config()[lay.site_of(3, 0)] = SiteState::sleeping();
        CHECK(contains(proc.assert_properties(), Property::P6));
    }
    SUBCASE("free particle off the marked sites") {
        CarpetProcedure proc = make_proc(lay, full(lay));
        const std::int64_t x = lay.site_of(3, 2);
        proc.mutable_config()[x].receive();
        proc.mutable_free_particles().push_back(FreeParticle{1000, x, false});
        CHECK(proc.assert_properties() == std::vector<Property>{Property::P7});
    }
}

TEST_CASE("condition 1 boundaries") {
    CHECK(check_condition1(16, 15, 10, 1));
    CHECK_FALSE(check_condition1(16, 15, 10, 2));
    CHECK_FALSE(check_condition1(16, 15, 11, 1));
    CHECK(check_condition1(8, 7, 5, 0));
    CHECK_FALSE(check_condition1(8, 6, 0, 0));
}

TEST_CASE("a mode with no eligible block is empty") {
    const BlockLayout lay = build_layout(4, 4);
    Configuration c = full(lay);
    for (std::int64_t i = 1; i <= lay.n(); ++i) c[lay.site_of(i, 0)] = SiteState::empty();
    CarpetProcedure proc = make_proc(lay, c);
    const ModeReport r = proc.run_mode();
    CHECK(r.attempts == 0);
    CHECK(r.jumps == 0);
    CHECK(r.emissions == 0);
}

TEST_CASE("hole records") {
    const BlockLayout lay = build_layout(4, 6);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CarpetProcedure proc = CarpetProcedure::init_first_mode(0.99, lay, 1.0, seed);
        proc.set_record_holes(true);
        for (int m = 0; m < 6 && proc.choose_hot(); ++m) {
            const ModeReport r = proc.run_mode();
            if (!r.condition1) break;
            proc.relabel_blocks();
        }
        for (const HoleRecord& h : proc.hole_records()) {
            CHECK(h.steps >= 1);
            CHECK(h.hole_after >= 0);
            CHECK(h.hole_after <= lay.a());
            if (h.outcome == EmissionOutcome::Failure) CHECK(h.hole_after == lay.a());
        }
    }
}

TEST_CASE("successful modes make jumps") {
    const BlockLayout lay = build_layout(4, 4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CarpetProcedure proc = CarpetProcedure::init_first_mode(0.97, lay, 0.5, seed);
        const ModeReport r = proc.run_mode();
        if (r.condition1 && r.attempts > 0) CHECK(r.jumps >= 1);
        CHECK(r.free - r.defects == r.free_minus_defects_start);
    }
}

TEST_CASE("frozen block resets after covering its hole zone") {
    // Search runs for an emission out of the frozen branch that resets the
    // hole; the block must then hold no frozen particle.
    int resets = 0;
    for (std::uint64_t seed = 0; seed < 200 && resets < 3; ++seed) {
        const BlockLayout lay = build_layout(4, 4);
        CarpetProcedure proc = CarpetProcedure::init_first_mode(0.99, lay, 2.0, seed);
        for (int m = 0; m < 8 && proc.choose_hot(); ++m) {
            proc.run_mode([&](const HoleRecord& h) {
                if (h.hole_before == lay.a() && h.outcome != EmissionOutcome::Failure && h.hole_after == 0) {
                    ++resets;
                    const std::int64_t top = lay.site_of(h.block, lay.a());
                    for (const FreeParticle& f : proc.free_particles()) CHECK_FALSE((f.frozen && f.site == top));
                }
            });
            proc.relabel_blocks();
        }
    }
    CHECK(resets > 0);
}

TEST_CASE("finalize") {
    const BlockLayout lay = build_layout(2, 4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CarpetProcedure proc = CarpetProcedure::init_first_mode(0.5, lay, 1.0, seed);
        const std::int64_t particles = proc.config().total_particles();
        proc.run_mode();
        const std::uint64_t procedure_jumps = proc.jumps();
        const FinalizeResult r = proc.finalize_stabilization();
        REQUIRE(r.status == StabilizeStatus::Stable);
        CHECK(r.config.is_stable());
        CHECK(r.config.total_particles() == particles);
        CHECK(r.total_jumps == procedure_jumps + r.residual_jumps);
        CHECK_THROWS_AS(proc.choose_hot(), UsageError);
    }
    SUBCASE("stable residual adds nothing") {
        Configuration empty(lay.ring_size());
        CarpetProcedure idle = make_proc(lay, empty);
        const FinalizeResult r = idle.finalize_stabilization();
        CHECK(r.residual_jumps == 0);
        CHECK(r.total_jumps == 0);
    }
}

TEST_CASE("flow invariance on small rings") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const FlowInvarianceReport r = verify_flow_invariance(2, 4, 0.5, 0.97, seed);
        CHECK(r.verdict == InvarianceVerdict::Holds);
        CHECK(r.blocks.size() == 2);
    }
    const FlowInvarianceReport cut = verify_flow_invariance(4, 4, 0.5, 0.97, 1, 10);
    CHECK(cut.verdict == InvarianceVerdict::Inconclusive);
}

TEST_CASE("state dump") {
    const BlockLayout lay = build_layout(2, 4);
    Configuration c = full(lay);
    c[lay.site_of(1, 5)] = SiteState::empty();
    c[lay.site_of(2, 0)] = SiteState::empty();
    const CarpetProcedure proc = make_proc(lay, c);
    std::istringstream in(render_state(proc));
    std::string header, glyphs, marks;
    std::getline(in, header);
    std::getline(in, glyphs);
    std::getline(in, marks);
    CHECK(header.find("mode 0") != std::string::npos);
    CHECK(marks.size() == static_cast<std::size_t>(lay.ring_size()));
    CHECK(std::count(marks.begin(), marks.end(), '_') == lay.block_count());
    CHECK(std::count(marks.begin(), marks.end(), '|') == lay.block_count());
    CHECK(std::count(glyphs.begin(), glyphs.end(), '.') == 1);
    // Sites render left to right from the left edge of block 0.
    CHECK(marks[static_cast<std::size_t>(lay.half_block())] == '_');
}
