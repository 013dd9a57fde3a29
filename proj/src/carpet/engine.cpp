#include "arw/carpet/engine.hpp"

#include <algorithm>
#include <string>

#include "arw/carpet/render.hpp"
#include "arw/core/errors.hpp"
#include "arw/core/philox.hpp"

namespace arw::carpet {

namespace {

std::size_t idx(std::int64_t i) { return static_cast<std::size_t>(i); }

}  // namespace

CarpetProcedure::CarpetProcedure(BlockLayout layout, Configuration config, InstructionTapes tapes,
                                 std::uint64_t budget)
    : layout_(layout), system_(std::move(config), std::move(tapes), budget) {
    const std::int64_t n_sites = layout_.ring_size();
    const std::int64_t a = layout_.a();
    if (a < 4) {
        throw ParameterError("the carpet procedure needs a >= 4 (hole zone inside the right half-block)");
    }
    if (system_.config().ring_size() != n_sites) {
        throw ParameterError("configuration size " + std::to_string(system_.config().ring_size()) +
                             " does not match the layout ring size " + std::to_string(n_sites));
    }
    if (!(system_.tapes().layout() == StreamLayout::blocks(layout_.block_size(), a))) {
        throw ParameterError("instruction tapes must use the block stream layout of the carpet layout");
    }

    const std::int64_t blocks = layout_.block_count();
    labels_.assign(idx(n_sites), SiteLabels{});
    hole_.assign(idx(blocks), 0);
    defects_.assign(idx(blocks), 0);
    frozen_.assign(idx(blocks), 0);
    flows_.assign(idx(blocks), BlockFlow{});
    attempts_.assign(idx(blocks), 0);
    last_failed_.assign(idx(blocks), 0);

    for (std::int64_t x = 0; x < n_sites; ++x) {
        const SiteState s = system_.config()[x];
        if (!(s.is_empty() || s == SiteState::active(1))) {
            throw ParameterError("site " + std::to_string(x) + " holds " + s.to_string() +
                                 "; the procedure starts from at most one active particle per site");
        }
        SiteLabels& lab = labels_[idx(x)];
        const std::int64_t block = layout_.block_of(x);
        if (layout_.offset_of(x) == 0) {
            lab.hole = true;
            if (!s.is_empty()) add_free(x, false);
        } else if (s.is_empty()) {
            lab.defect = true;
            ++defects_[idx(block)];
        } else {
            lab.carpet = true;
        }
    }
    begin_mode();
}

CarpetProcedure CarpetProcedure::init_first_mode(double zeta, BlockLayout layout, double sleep_rate,
                                                 std::uint64_t seed, std::uint64_t budget) {
    if (!(zeta > 0.0 && zeta < 1.0)) {
        throw ParameterError("density must lie in (0, 1)");
    }
    Configuration config = Configuration::bernoulli(layout.ring_size(), zeta, derive_seed(seed, 0, 0));
    InstructionTapes tapes(derive_seed(seed, 1, 0), sleep_rate, layout.ring_size(),
                           StreamLayout::blocks(layout.block_size(), layout.a()));
    return CarpetProcedure(layout, std::move(config), std::move(tapes), budget);
}

std::size_t CarpetProcedure::index_of(std::uint64_t id) const {
    for (std::size_t i = 0; i < free_.size(); ++i) {
        if (free_[i].id == id) return i;
    }
    require(false, "unknown free particle id");
    return 0;
}

std::size_t CarpetProcedure::add_free(std::int64_t site, bool frozen) {
    free_.push_back(FreeParticle{next_id_++, site, frozen});
    return free_.size() - 1;
}

void CarpetProcedure::erase_free(std::size_t index) {
    free_[index] = free_.back();
    free_.pop_back();
}

void CarpetProcedure::move_hole(std::int64_t block, std::int64_t offset) {
    labels_[idx(layout_.site_of(block, hole_[idx(block)]))].hole = false;
    hole_[idx(block)] = offset;
    labels_[idx(layout_.site_of(block, offset))].hole = true;
}

std::int64_t CarpetProcedure::frozen_count() const noexcept {
    return std::count_if(free_.begin(), free_.end(), [](const FreeParticle& f) { return f.frozen; });
}

std::int64_t CarpetProcedure::defect_count() const noexcept {
    std::int64_t total = 0;
    for (std::int64_t d : defects_) total += d;
    return total;
}

void CarpetProcedure::require(bool condition, const char* what) const {
    if (!condition) {
        throw EngineInvariantViolation(std::string("carpet engine: ") + what + "\n" + render_state(*this));
    }
}

void CarpetProcedure::require_live() const {
    if (finalized_) throw UsageError("the procedure was finalized; labels are no longer maintained");
}

std::optional<HotChoice> CarpetProcedure::choose_hot(std::int64_t max_label) const {
    require_live();
    const std::int64_t a = layout_.a();
    const std::int64_t top = std::min(max_label, layout_.n());
    // Sort key: label, then iK before iK + a, then id.
    std::optional<HotChoice> best;
    std::int64_t best_rank = 0;
    for (const FreeParticle& f : free_) {
        if (f.frozen) continue;
        const std::int64_t block = layout_.block_of(f.site);
        const std::int64_t label = layout_.label(block);
        if (label < 1 || label > top || defects_[idx(block)] > 0) continue;
        const std::int64_t offset = layout_.offset_of(f.site);
        if (offset != 0 && offset != a) continue;
        const std::int64_t rank = label * 2 + (offset == 0 ? 0 : 1);
        if (!best || rank < best_rank || (rank == best_rank && f.id < best->particle)) {
            best = HotChoice{label, block, f.site, f.id};
            best_rank = rank;
        }
    }
    return best;
}

void CarpetProcedure::land(std::int64_t receiver, std::int64_t site, bool from_right,
                           std::optional<std::size_t> particle) {
    SiteLabels& lab = labels_[idx(site)];
    BlockFlow& flow = flows_[idx(receiver)];
    const bool defective = defects_[idx(receiver)] > 0;
    if (lab.defect) {
        lab.defect = false;
        lab.carpet = true;
        --defects_[idx(receiver)];
        if (particle) erase_free(*particle);
        if (from_right) ++flow.arrived_vacant;
        return;
    }
    const std::int64_t offset = layout_.offset_of(site);
    require(offset == 0 || (from_right && !defective && offset == layout_.a()),
            "particle landed outside a defect, iK or iK + a");
    if (particle) {
        free_[*particle].site = site;
    } else {
        add_free(site, false);
    }
    if (from_right) {
        if (defective) {
            ++flow.arrived_vacant;
        } else {
            ++flow.arrived_parked;
        }
    }
}

EmissionOutcome CarpetProcedure::attempted_emission(const HotChoice& choice) {
    require_live();
    require(!hot_.has_value(), "attempted emission started while another is in progress");
    const std::int64_t a = layout_.a();
    const std::int64_t k = layout_.block_size();
    const std::int64_t half = layout_.half_block();
    const std::int64_t block = choice.block;

    std::size_t hot = index_of(choice.particle);
    require(!free_[hot].frozen && free_[hot].site == choice.site, "hot particle must be a thawed free particle");
    require(defects_[idx(block)] == 0, "hot particle chosen in a defective block");
    hot_ = choice.particle;

    std::int64_t site = choice.site;
    std::int64_t d = layout_.displacement(block, site);
    std::int64_t hole = hole_[idx(block)];
    const std::int64_t hole_before = hole;
    const bool frozen_branch = frozen_[idx(block)] > 0;
    Phase phase = frozen_branch ? Phase::Frozen : (d == hole ? Phase::AtHole : Phase::Seeking);
    std::int64_t leftmost = hole;
    std::vector<std::uint8_t> visited;
    std::int64_t unvisited = 0;
    if (frozen_branch) {
        visited.assign(idx(a + 1), 0);
        visited[idx(d)] = 1;
        unvisited = a;
    }
    std::uint64_t steps = 0;

    for (;;) {
        const StreamTag tag = d < 0 ? StreamTag::Right : (d > a ? StreamTag::Left : StreamTag::Single);
        const ToppleOutcome out = system_.topple(site, tag);

        if (!out.jumped) {
            if (phase != Phase::AtHole || !system_.config()[site].is_sleeping()) continue;
            // The hot particle fell asleep alone in the hole.
            ++steps;
            erase_free(hot);
            labels_[idx(site)].carpet = true;
            move_hole(block, hole + 1);
            hole += 1;
            const std::int64_t next = layout_.site_of(block, hole);
            require(labels_[idx(next)].carpet, "no carpet particle to the right of the hole");
            labels_[idx(next)].carpet = false;
            if (hole == a) {
                add_free(next, true);
                frozen_[idx(block)] = 1;
                hot_.reset();
                finish_attempt(block, choice.label, hole_before, steps, EmissionOutcome::Failure);
                return EmissionOutcome::Failure;
            }
            hot = add_free(next, false);
            hot_ = free_[hot].id;
            site = next;
            d = hole;
            continue;
        }

        site = out.target;
        d += out.instruction == Instruction::JumpRight ? 1 : -1;
        free_[hot].site = site;

        std::optional<std::int64_t> receiver;
        bool from_right = false;
        if (d >= half) {
            // Entering the right neighbour from its left end: the first vacant
            // site, or its centre.
            const std::int64_t v = d - k;
            if (v == 0 || (v < 0 && system_.config()[site].particles() == 1)) receiver = block + 1;
        } else if (d < -half) {
            const std::int64_t v = d + k;
            const std::int64_t left = layout_.wrap_block(block - 1);
            const bool hit = defects_[idx(left)] > 0 ? (v == 0 || (v > 0 && system_.config()[site].particles() == 1))
                                                     : v == a;
            if (hit) {
                receiver = block - 1;
                from_right = true;
            }
        }
        if (receiver) {
            ++steps;
            const std::int64_t q = layout_.wrap_block(*receiver);
            land(q, site, from_right, hot);
            hot_.reset();
            BlockFlow& flow = flows_[idx(block)];
            ++(from_right ? flow.emitted_left : flow.emitted_right);
            flow.emitted = true;
            if (frozen_branch && unvisited == 0) {
                // Full sweep of [iK, iK + a]: reset the hole, thaw the block.
                const std::int64_t top = layout_.site_of(block, a);
                const std::int64_t centre = layout_.site_of(block, 0);
                std::size_t frozen_index = free_.size();
                for (std::size_t i = 0; i < free_.size(); ++i) {
                    if (free_[i].frozen && free_[i].site == top) frozen_index = i;
                }
                require(frozen_index < free_.size(), "frozen particle missing at iK + a");
                erase_free(frozen_index);
                labels_[idx(top)].carpet = true;
                move_hole(block, 0);
                require(labels_[idx(centre)].carpet, "no carpet particle at iK to thaw");
                labels_[idx(centre)].carpet = false;
                add_free(centre, false);
                frozen_[idx(block)] = 0;
            }
            const EmissionOutcome outcome = from_right ? EmissionOutcome::EmittedLeft : EmissionOutcome::EmittedRight;
            finish_attempt(block, choice.label, hole_before, steps, outcome);
            return outcome;
        }

        switch (phase) {
            case Phase::Seeking:
                if (d == hole) phase = Phase::AtHole;
                break;
            case Phase::AtHole:
                phase = Phase::Excursion;
                leftmost = std::min(hole, d);
                break;
            case Phase::Excursion:
                leftmost = std::min(leftmost, d);
                if (d == hole) {
                    ++steps;
                    const std::int64_t target = std::max<std::int64_t>(leftmost, 0);
                    if (target < hole) {
                        erase_free(hot);
                        labels_[idx(site)].carpet = true;
                        move_hole(block, target);
                        hole = target;
                        site = layout_.site_of(block, target);
                        require(labels_[idx(site)].carpet, "no carpet particle at the new hole");
                        labels_[idx(site)].carpet = false;
                        hot = add_free(site, false);
                        hot_ = free_[hot].id;
                        d = target;
                    }
                    phase = Phase::AtHole;
                }
                break;
            case Phase::Frozen:
                if (d >= 0 && d <= a && visited[idx(d)] == 0) {
                    visited[idx(d)] = 1;
                    --unvisited;
                }
                if (d == hole) ++steps;
                break;
        }
    }
}

void CarpetProcedure::finish_attempt(std::int64_t block, std::int64_t label, std::int64_t hole_before,
                                     std::uint64_t steps, EmissionOutcome outcome) {
    const bool failed = outcome == EmissionOutcome::Failure;
    if (failed && last_failed_[idx(block)] != 0) ++consecutive_failures_;
    last_failed_[idx(block)] = failed ? 1 : 0;
    flows_[idx(block)].frozen = frozen_[idx(block)];
    last_record_ = HoleRecord{mode_,         block, label, attempts_[idx(block)]++, hole_before, hole_[idx(block)],
                              steps,         outcome};
    if (record_holes_) hole_records_.push_back(last_record_);
}

void CarpetProcedure::begin_mode() {
    require_live();
    for (std::size_t p = 0; p < flows_.size(); ++p) {
        flows_[p] = BlockFlow{};
        flows_[p].frozen = frozen_[p];
    }
    mode_start_jumps_ = system_.jumps();
    mode_start_balance_ = free_count() - defect_count();
}

bool CarpetProcedure::run_attempts(std::int64_t max_label, const AttemptObserver& observer) {
    require_live();
    while (const auto choice = choose_hot(max_label)) {
        try {
            attempted_emission(*choice);
        } catch (const BudgetExhausted&) {
            return false;
        }
        if (observer) observer(last_record_);
    }
    return true;
}

ModeReport CarpetProcedure::end_mode(bool truncated) const {
    ModeReport r;
    r.mode = mode_;
    r.truncated = truncated;
    r.free = free_count();
    r.frozen = frozen_count();
    r.defects = defect_count();
    r.jumps = system_.jumps() - mode_start_jumps_;
    r.free_minus_defects_start = mode_start_balance_;
    r.flows.resize(idx(layout_.block_count()));
    for (std::int64_t label = 0; label < layout_.block_count(); ++label) {
        const std::int64_t p = layout_.physical(label);
        BlockFlow f = flows_[idx(p)];
        f.frozen = frozen_[idx(p)];
        r.flows[idx(label)] = f;
        r.emissions += f.emitted_left + f.emitted_right;
        r.frozen_total += f.frozen;
        if (f.emitted) r.frozen_in_emitters += f.frozen;
    }
    r.condition1 = check_condition1(r, layout_.n());
    return r;
}

ModeReport CarpetProcedure::run_mode(const AttemptObserver& observer) {
    begin_mode();
    std::uint64_t attempts = 0;
    std::uint64_t failures = 0;
    const bool complete = run_attempts(layout_.n(), [&](const HoleRecord& rec) {
        ++attempts;
        if (rec.outcome == EmissionOutcome::Failure) ++failures;
        if (observer) observer(rec);
    });
    ModeReport r = end_mode(!complete);
    r.attempts = attempts;
    r.failures = failures;
    return r;
}

void CarpetProcedure::relabel_blocks() {
    require_live();
    layout_.relabel();
    ++mode_;
}

void CarpetProcedure::inject_from_right(std::int64_t label) {
    require_live();
    const std::int64_t q = layout_.physical(label);
    std::int64_t offset = layout_.a();
    if (defects_[idx(q)] > 0) {
        offset = 0;
        for (std::int64_t v = layout_.half_block() - 1; v > 0; --v) {
            if (labels_[idx(layout_.site_of(q, v))].defect) {
                offset = v;
                break;
            }
        }
    }
    const std::int64_t site = layout_.site_of(q, offset);
    system_.mutable_config()[site].receive();
    land(q, site, true, std::nullopt);
}

FinalizeResult CarpetProcedure::finalize_stabilization() {
    require_live();
    finalized_ = true;
    FinalizeResult result;
    const std::uint64_t before = system_.jumps();
    if (hot_) {
        // Budget ran out mid-emission; nothing left to spend.
        result.status = StabilizeStatus::BudgetExhausted;
    } else {
        result.status = stabilize(system_, TopplingPolicy::lowest_first()).status;
    }
    result.residual_jumps = system_.jumps() - before;
    result.total_jumps = system_.jumps();
    result.config = system_.config();
    return result;
}

}  // namespace arw::carpet
