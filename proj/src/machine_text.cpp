#include "sigmach/machine_text.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

namespace sigmach {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::istringstream in{std::string(raw)};
        Line line{number, {}};
        for (std::string tok; in >> tok;) line.tokens.push_back(std::move(tok));
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return lines;
}

Rational parse_rational(const Line& line, const std::string& token) {
    try {
        return Rational::parse(token);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line.number, e.what());
    }
}

SignalId lookup(const Line& line, const std::map<std::string, SignalId, std::less<>>& names, const std::string& name) {
    const auto it = names.find(name);
    if (it == names.end()) throw ParseError(line.number, "undeclared meta-signal '" + name + "'");
    return it->second;
}

SignalSet parse_set(const Line& line, const std::map<std::string, SignalId, std::less<>>& names,
                    std::vector<std::string>::const_iterator first, std::vector<std::string>::const_iterator last,
                    const char* role) {
    std::vector<SignalId> ids;
    for (auto it = first; it != last; ++it) ids.push_back(lookup(line, names, *it));
    try {
        return make_signal_set(std::move(ids));
    } catch (const std::invalid_argument&) {
        throw ParseError(line.number, std::string("duplicate meta-signal in rule ") + role);
    }
}

void parse_init_line(const Line& line, const std::map<std::string, SignalId, std::less<>>& names,
                     Configuration& config) {
    if (line.tokens.size() != 3) throw ParseError(line.number, "expected 'init <rational> <name>'");
    const Rational position = parse_rational(line, line.tokens[1]);
    const SignalId id = lookup(line, names, line.tokens[2]);
    if (config.at(position)) throw ParseError(line.number, "duplicate position " + position.str() + " in init");
    config.place(position, id);
}

std::map<std::string, SignalId, std::less<>> name_index(const SignalMachine& m) {
    std::map<std::string, SignalId, std::less<>> names;
    for (SignalId i = 0; i < m.size(); ++i) names.emplace(m.name(i), i);
    return names;
}

}  // namespace

ParsedMachine parse_machine(std::string_view text) {
    const auto lines = tokenize(text);

    std::vector<MetaSignal> signals;
    std::map<std::string, SignalId, std::less<>> names;
    for (const auto& line : lines) {
        const auto& kw = line.tokens.front();
        if (kw != "speed" && kw != "rule" && kw != "blank" && kw != "init") {
            throw ParseError(line.number, "unknown directive '" + kw + "'");
        }
        if (kw != "speed") continue;
        if (line.tokens.size() != 3) throw ParseError(line.number, "expected 'speed <name> <rational>'");
        const auto& name = line.tokens[1];
        if (!is_identifier(name)) throw ParseError(line.number, "malformed meta-signal name '" + name + "'");
        if (names.contains(name)) throw ParseError(line.number, "meta-signal '" + name + "' declared twice");
        names.emplace(name, static_cast<SignalId>(signals.size()));
        signals.push_back({name, parse_rational(line, line.tokens[2])});
    }

    std::vector<CollisionRule> rules;
    Configuration config;
    bool has_init = false;
    for (const auto& line : lines) {
        const auto& kw = line.tokens.front();
        if (kw == "rule") {
            const auto arrow = std::find(line.tokens.begin(), line.tokens.end(), "->");
            if (arrow == line.tokens.end()) throw ParseError(line.number, "missing '->' in rule");
            if (std::count(line.tokens.begin(), line.tokens.end(), "->") != 1) {
                throw ParseError(line.number, "more than one '->' in rule");
            }
            if (arrow - line.tokens.begin() < 3) throw ParseError(line.number, "a rule needs at least two inputs");
            CollisionRule rule{parse_set(line, names, line.tokens.begin() + 1, arrow, "input"),
                               parse_set(line, names, arrow + 1, line.tokens.end(), "output")};
            rules.push_back(std::move(rule));
        } else if (kw == "blank") {
            if (line.tokens.size() < 3) throw ParseError(line.number, "a blank crossing needs at least two signals");
            SignalSet set = parse_set(line, names, line.tokens.begin() + 1, line.tokens.end(), "input");
            rules.push_back(CollisionRule{set, set, true});
        } else if (kw == "init") {
            has_init = true;
            parse_init_line(line, names, config);
        }
    }

    ParsedMachine out{SignalMachine(std::move(signals), std::move(rules)), std::nullopt};
    if (has_init) out.init = std::move(config);
    return out;
}

Configuration parse_init(std::string_view text, const SignalMachine& machine) {
    const auto names = name_index(machine);
    Configuration config;
    for (const auto& line : tokenize(text)) {
        if (line.tokens.front() != "init") {
            throw ParseError(line.number, "only 'init' lines are allowed in an initial configuration");
        }
        parse_init_line(line, names, config);
    }
    return config;
}

namespace {

using RuleKey = std::vector<std::tuple<int, Rational, std::string>>;

RuleKey rule_key(const SignalMachine& m, const CollisionRule& r) {
    RuleKey key;
    key.emplace_back(r.crossing ? 1 : 0, Rational(0), std::string());
    for (auto id : by_speed(m, r.inputs)) key.emplace_back(0, m.speed(id), m.name(id));
    for (auto id : by_speed(m, r.outputs)) key.emplace_back(1, m.speed(id), m.name(id));
    return key;
}

}  // namespace

std::string emit_init(const SignalMachine& machine, const Configuration& config) {
    std::string out;
    for (const auto& [x, id] : config) out += "init " + x.str() + " " + machine.name(id) + "\n";
    return out;
}

std::string emit_machine(const SignalMachine& machine, const std::optional<Configuration>& config) {
    std::vector<SignalId> order(machine.size());
    for (SignalId i = 0; i < machine.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](SignalId a, SignalId b) {
        return std::tie(machine.speed(a), machine.name(a)) < std::tie(machine.speed(b), machine.name(b));
    });

    std::string out;
    for (auto id : order) out += "speed " + machine.name(id) + " " + machine.speed(id).str() + "\n";

    std::vector<const CollisionRule*> rules;
    for (const auto& r : machine.rules()) rules.push_back(&r);
    std::sort(rules.begin(), rules.end(),
              [&](const CollisionRule* a, const CollisionRule* b) { return rule_key(machine, *a) < rule_key(machine, *b); });
    if (!rules.empty()) out += "\n";
    for (const auto* r : rules) {
        if (r->crossing) {
            out += "blank";
            for (auto id : by_speed(machine, r->inputs)) out += " " + machine.name(id);
            out += "\n";
            continue;
        }
        out += "rule";
        for (auto id : by_speed(machine, r->inputs)) out += " " + machine.name(id);
        out += " ->";
        for (auto id : by_speed(machine, r->outputs)) out += " " + machine.name(id);
        out += "\n";
    }

    if (config && !config->empty()) out += "\n" + emit_init(machine, *config);
    return out;
}

}  // namespace sigmach
