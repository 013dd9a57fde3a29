#include "arw/carpet/state.hpp"

namespace arw::carpet {

std::string_view to_string(EmissionOutcome outcome) noexcept {
    switch (outcome) {
        case EmissionOutcome::EmittedLeft:
            return "emitted-left";
        case EmissionOutcome::EmittedRight:
            return "emitted-right";
        case EmissionOutcome::Failure:
            return "failure";
    }
    return "?";
}

std::string_view to_string(Property p) noexcept {
    switch (p) {
        case Property::P1:
            return "P1";
        case Property::P2:
            return "P2";
        case Property::P4:
            return "P4";
        case Property::P5:
            return "P5";
        case Property::P6:
            return "P6";
        case Property::P7:
            return "P7";
        case Property::P8:
            return "P8";
        case Property::P9:
            return "P9";
        case Property::P10:
            return "P10";
        case Property::Bookkeeping:
            return "bookkeeping";
    }
    return "?";
}

}  // namespace arw::carpet
