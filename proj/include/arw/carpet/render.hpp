#pragma once

#include <string>

namespace arw::carpet {

class CarpetProcedure;

/// Two-line picture of the ring, one glyph per site:
///   ● active carpet   ○ sleeping carpet   ■ free   □ frozen   . defect
/// A vacant hole is blank. The second line puts `_` under every hole and
/// `|` under the left edge of each block.
std::string render_state(const CarpetProcedure& procedure);

}  // namespace arw::carpet
