#include "sigmach/patterns.hpp"

#include <stdexcept>

namespace sigmach::patterns {

namespace {

void check_spec(const SignalMachine& machine, const PatternSpec& spec) {
    if (spec.emitted.empty()) throw std::invalid_argument("a pattern needs at least one emitted signal");
    if (spec.spacing.sign() <= 0) throw std::invalid_argument("spacing must be positive");
    for (const auto& name : spec.emitted)
        if (!machine.speed(machine.id(name)).is_zero())
            throw std::invalid_argument("emitted signal '" + name + "' must have speed 0");
    if (!spec.way_speeds.empty()) {
        if (spec.way_speeds.size() != spec.emitted.size())
            throw std::invalid_argument("one bouncer speed per emitted signal");
        for (const auto& w : spec.way_speeds)
            if (w <= Rational(1)) throw std::invalid_argument("bouncer speeds must exceed 1");
    }
}

}  // namespace

PatternFragment build_pattern_generator(SignalMachine& machine, const PatternSpec& spec) {
    check_spec(machine, spec);
    const std::size_t k = spec.emitted.size();
    const Rational& d = spec.spacing;
    PatternFragment out;
    auto add = [&](const std::string& name, const Rational& speed) {
        machine.add_signal(name, speed);
        out.added_signals.push_back(name);
    };
    auto rule = [&](std::initializer_list<std::string_view> in, std::initializer_list<std::string_view> o) {
        machine.add_rule(in, o);
        ++out.added_rules;
    };
    auto nth = [&](std::size_t i) { return std::to_string(i % k + 1); };

    if (spec.way_speeds.empty()) {
        add("boun", Rational(2));
        for (std::size_t i = 0; i < k; ++i) add("bord_" + nth(i), Rational(1));
        for (std::size_t i = 0; i < k; ++i) {
            const std::string bord = "bord_" + nth(i);
            const std::string next = "bord_" + nth(i + 1);
            rule({"boun", bord}, {spec.emitted[(i + 1) % k], next});
            rule({bord, spec.emitted[i]}, {spec.emitted[i], next, "boun"});
        }
        out.initial.place(Rational(0), machine.id("bord_1"));
        out.initial.place(d / Rational(2), machine.id("boun"));
        out.initial.place(d, machine.id("bord_" + nth(k - 1)));
        return out;
    }

    add("bord", Rational(1));
    for (std::size_t i = 0; i < k; ++i) add("way_" + nth(i), spec.way_speeds[i]);
    for (std::size_t i = 0; i < k; ++i) add("back_" + nth(i), Rational(-1));
    for (std::size_t i = 0; i < k; ++i) {
        rule({"way_" + nth(i), "bord"}, {"bord", "back_" + nth(i), spec.emitted[i]});
        rule({"back_" + nth(i), "bord"}, {"bord", "way_" + nth(i + 1)});
    }
    out.initial.place(Rational(0), machine.id("bord"));
    out.initial.place(d / Rational(2), machine.id("way_1"));
    out.initial.place(d, machine.id("bord"));
    return out;
}

PatternMachine standalone_pattern(std::size_t k, const Rational& spacing, const std::vector<Rational>& way_speeds) {
    PatternMachine pm;
    PatternSpec spec;
    for (std::size_t i = 1; i <= k; ++i) {
        spec.emitted.push_back("mu_" + std::to_string(i));
        pm.machine.add_signal(spec.emitted.back(), Rational(0));
    }
    spec.spacing = spacing;
    spec.way_speeds = way_speeds;
    pm.fragment = build_pattern_generator(pm.machine, spec);
    pm.initial = pm.fragment.initial;
    return pm;
}

std::vector<Rational> expected_emissions(const PatternSpec& spec, std::size_t count) {
    std::vector<Rational> out;
    const Rational& d = spec.spacing;
    if (spec.way_speeds.empty()) {
        for (std::size_t i = 0; i < count; ++i) out.push_back(d * Rational(3, 2) + d * Rational(2 * long(i)));
        return out;
    }
    const std::size_t k = spec.way_speeds.size();
    Rational x = d + d / (Rational(2) * (spec.way_speeds[0] - Rational(1)));
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(x);
        x += d / Rational(2) + d / (spec.way_speeds[(i + 1) % k] - Rational(1));
    }
    return out;
}

}  // namespace sigmach::patterns
