#include "sigmach/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>
#include <vector>

#include "sigmach/machine_text.hpp"

namespace sigmach {

StyleMap parse_style(std::string_view text) {
    StyleMap out;
    std::istringstream in{std::string(text)};
    std::size_t number = 0;
    for (std::string line; std::getline(in, line);) {
        ++number;
        std::istringstream fields(line);
        std::vector<std::string> tok;
        // `#` opens a comment only as a token of its own or at the start of
        // the line, so that colours such as #ff0000 survive.
        for (std::string t; fields >> t;) {
            if (t[0] == '#' && (tok.empty() || t == "#")) break;
            tok.push_back(std::move(t));
        }
        if (tok.empty()) continue;
        if (tok.size() != 4) throw ParseError(number, "expected '<meta-signal> <color> <solid|dashed|dotted> <width>'");
        SignalStyle style;
        style.color = tok[1];
        if (tok[2] == "solid") {
            style.dash = StrokeDash::Solid;
        } else if (tok[2] == "dashed") {
            style.dash = StrokeDash::Dashed;
        } else if (tok[2] == "dotted") {
            style.dash = StrokeDash::Dotted;
        } else {
            throw ParseError(number, "unknown dash style '" + tok[2] + "'");
        }
        try {
            std::size_t used = 0;
            style.width = std::stod(tok[3], &used);
            if (used != tok[3].size() || style.width <= 0) throw std::invalid_argument("width");
        } catch (const std::exception&) {
            throw ParseError(number, "bad stroke width '" + tok[3] + "'");
        }
        out[tok[0]] = std::move(style);
    }
    return out;
}

std::string emit_style(const StyleMap& style) {
    std::string out;
    for (const auto& [name, st] : style) {
        char width[32];
        std::snprintf(width, sizeof width, "%g", st.width);
        const char* dash = st.dash == StrokeDash::Solid ? "solid" : st.dash == StrokeDash::Dashed ? "dashed" : "dotted";
        out += name + " " + st.color + " " + dash + " " + width + "\n";
    }
    return out;
}

namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
                                                  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#ff7f0e"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

SignalStyle style_for(const SignalMachine& m, SignalId id, const StyleMap& style) {
    if (const auto it = style.find(m.name(id)); it != style.end()) return it->second;
    return SignalStyle{kPalette[id % kPalette.size()], StrokeDash::Solid, 1.0};
}

std::string stroke_attrs(const SignalStyle& s) {
    std::string out = "stroke=\"" + s.color + "\" stroke-width=\"" + num(s.width) + "\"";
    if (s.dash == StrokeDash::Dashed) out += " stroke-dasharray=\"6 3\"";
    if (s.dash == StrokeDash::Dotted) out += " stroke-dasharray=\"1.5 3\"";
    return out;
}

}  // namespace

std::string render_svg(const SpaceTimeDiagram& diagram, const SignalMachine& machine, const StyleMap& style,
                       const RenderOptions& options) {
    // Top of the picture, in model time.
    Rational top(0);
    if (diagram.horizon) {
        top = *diagram.horizon;
    } else {
        if (!diagram.events.empty()) top = diagram.events.back().time;
        Rational pad = top / Rational(5);
        if (pad < Rational(1)) pad = Rational(1);
        top += pad;
    }

    struct Drawn {
        SignalId signal;
        double x1, t1, x2, t2;
    };
    std::vector<Drawn> lines;
    lines.reserve(diagram.segments.size());
    double xmin = 0.0;
    double xmax = 0.0;
    bool any = false;
    for (const auto& seg : diagram.segments) {
        const SpacePoint end = seg.end ? *seg.end
                                       : SpacePoint{seg.start.position + machine.speed(seg.signal) * (top - seg.start.time), top};
        Drawn d{seg.signal, seg.start.position.to_double(), seg.start.time.to_double(), end.position.to_double(),
                end.time.to_double()};
        const double lo = std::min(d.x1, d.x2);
        const double hi = std::max(d.x1, d.x2);
        xmin = any ? std::min(xmin, lo) : lo;
        xmax = any ? std::max(xmax, hi) : hi;
        any = true;
        lines.push_back(d);
    }

    const double s = options.scale;
    const double m = options.margin;
    const double ttop = top.to_double();
    const double legend_width = options.legend && machine.size() > 0 ? 140.0 : 0.0;
    const double width = 2 * m + (xmax - xmin) * s + legend_width;
    const double height = std::max(2 * m + ttop * s, options.legend ? 2 * m + 18.0 * machine.size() : 0.0);
    auto px = [&](double x) { return m + (x - xmin) * s; };
    auto py = [&](double t) { return m + (ttop - t) * s; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
        << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\"white\"/>\n";

    out << "<g id=\"segments\" fill=\"none\">\n";
    for (const auto& d : lines) {
        out << "<line x1=\"" << num(px(d.x1)) << "\" y1=\"" << num(py(d.t1)) << "\" x2=\"" << num(px(d.x2))
            << "\" y2=\"" << num(py(d.t2)) << "\" " << stroke_attrs(style_for(machine, d.signal, style)) << "/>\n";
    }
    out << "</g>\n";

    if (options.show_events) {
        out << "<g id=\"events\">\n";
        for (const auto& ev : diagram.events) {
            out << "<circle cx=\"" << num(px(ev.position.to_double())) << "\" cy=\"" << num(py(ev.time.to_double()))
                << "\" r=\"" << (ev.blank ? "1.5" : "2.5") << "\" fill=\"" << (ev.blank ? "#999999" : "black")
                << "\"/>\n";
        }
        out << "</g>\n";
    }

    if (options.legend && machine.size() > 0) {
        const double lx = width - legend_width + 10.0;
        out << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
        for (SignalId id = 0; id < machine.size(); ++id) {
            const auto st = style_for(machine, id, style);
            const double y = m + 18.0 * id;
            out << "<rect x=\"" << num(lx) << "\" y=\"" << num(y) << "\" width=\"18\" height=\"4\" fill=\"" << st.color
                << "\"/>\n"
                << "<text x=\"" << num(lx + 24) << "\" y=\"" << num(y + 6) << "\">" << machine.name(id) << " ("
                << machine.speed(id).str() << ")</text>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace sigmach
