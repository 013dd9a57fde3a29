#include "arw/carpet/layout.hpp"

#include <string>

#include "arw/core/errors.hpp"

namespace arw::carpet {

BlockLayout BlockLayout::build(std::int64_t n, std::int64_t a) {
    if (n < 2 || n % 2 != 0) {
        throw ParameterError("block count n must be even and positive, got " + std::to_string(n));
    }
    if (a < 2 || a % 2 != 0) {
        throw ParameterError("hole span a must be even and at least 2, got " + std::to_string(a));
    }
    if (a > 3'000) {
        throw ParameterError("hole span a too large");
    }
    return BlockLayout{n, a};
}

}  // namespace arw::carpet
