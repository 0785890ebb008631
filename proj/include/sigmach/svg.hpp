#pragma once

#include <map>
#include <string>
#include <string_view>

#include "sigmach/engine.hpp"
#include "sigmach/machine.hpp"

namespace sigmach {

enum class StrokeDash { Solid, Dashed, Dotted };

struct SignalStyle {
    std::string color = "black";
    StrokeDash dash = StrokeDash::Solid;
    double width = 1.0;
};

/// Per meta-signal name.
using StyleMap = std::map<std::string, SignalStyle, std::less<>>;

/// Lines `<meta-signal> <css-color> <solid|dashed|dotted> <stroke-width>`,
/// `#` comments (a `#` at the start of a line or standing alone). Throws
/// ParseError.
StyleMap parse_style(std::string_view text);

/// One line per meta-signal, sorted by name.
std::string emit_style(const StyleMap& style);

struct RenderOptions {
    double scale = 40.0;  ///< pixels per space/time unit
    double margin = 20.0;
    bool show_events = true;
    bool legend = true;
};

/// SVG 1.1 space-time diagram: x to the right, time upward, one <line> per
/// segment. Signals still running at the end of a halted run are drawn up to
/// a little past the last collision.
std::string render_svg(const SpaceTimeDiagram& diagram, const SignalMachine& machine, const StyleMap& style = {},
                       const RenderOptions& options = {});

}  // namespace sigmach
