#include "arw/mc/excursion.hpp"

#include <cmath>

#include "arw/core/errors.hpp"
#include "arw/core/tapes.hpp"

namespace arw::mc {

double ExcursionLaw::frequency(std::int64_t k) const noexcept {
    if (samples == 0 || k < 1 || k > max_depth()) return 0.0;
    return static_cast<double>(counts[static_cast<std::size_t>(k - 1)]) / static_cast<double>(samples);
}

double ExcursionLaw::theoretical(std::int64_t k) noexcept {
    const double kk = static_cast<double>(k);
    return 1.0 / (kk * (kk + 1.0));
}

double ExcursionLaw::sigma(std::int64_t k) const noexcept {
    if (samples == 0) return 0.0;
    const double p = theoretical(k);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

ExcursionLaw excursion_min_law(std::uint64_t samples, std::uint64_t seed, double sleep_rate, std::int64_t max_depth) {
    if (max_depth < 1) throw ParameterError("max_depth must be at least 1");
    ExcursionLaw law;
    law.counts.assign(static_cast<std::size_t>(max_depth), 0);

    // Each excursion reads its own single-site stack.
    std::uint64_t excursion = 0;
    while (law.samples < samples) {
        InstructionTapes tape(derive_seed(seed, excursion++, 0), sleep_rate, 1);
        auto next_jump = [&tape] {
            for (;;) {
                const Instruction instr = tape.next(0, StreamTag::Single);
                if (is_jump(instr)) return instr;
            }
        };
        if (next_jump() == Instruction::JumpRight) {
            ++law.right_first;
            continue;
        }
        std::int64_t x = -1;
        std::int64_t lowest = -1;
        while (x != 0 && lowest >= -max_depth) {
            x += next_jump() == Instruction::JumpRight ? 1 : -1;
            if (x < lowest) lowest = x;
        }
        ++law.samples;
        if (lowest < -max_depth) {
            ++law.deeper;
        } else {
            ++law.counts[static_cast<std::size_t>(-lowest - 1)];
        }
    }
    return law;
}

}  // namespace arw::mc
