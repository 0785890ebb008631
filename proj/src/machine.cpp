#include "sigmach/machine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace sigmach {

SignalSet make_signal_set(std::vector<SignalId> ids) {
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw std::invalid_argument("meta-signal repeated in a collision set");
    }
    return ids;
}

bool is_identifier(std::string_view name) {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) return false;
    return std::all_of(name.begin() + 1, name.end(), [&](char c) { return alpha(c) || digit(c); });
}

SignalMachine::SignalMachine(std::vector<MetaSignal> signals, std::vector<CollisionRule> rules)
    : signals_(std::move(signals)), rules_(std::move(rules)) {
    reindex();
}

void SignalMachine::reindex() {
    by_name_.clear();
    by_inputs_.clear();
    for (SignalId i = 0; i < signals_.size(); ++i) by_name_.emplace(signals_[i].name, i);
    for (std::size_t r = 0; r < rules_.size(); ++r) by_inputs_.emplace(rules_[r].inputs, r);
}

SignalId SignalMachine::add_signal(std::string name, Rational speed) {
    if (!is_identifier(name)) throw std::invalid_argument("malformed meta-signal name '" + name + "'");
    if (by_name_.contains(name)) throw std::invalid_argument("meta-signal '" + name + "' declared twice");
    const auto id = static_cast<SignalId>(signals_.size());
    by_name_.emplace(name, id);
    signals_.push_back({std::move(name), std::move(speed)});
    return id;
}

SignalSet SignalMachine::resolve_names(std::span<const std::string_view> names) const {
    std::vector<SignalId> ids;
    ids.reserve(names.size());
    for (auto n : names) ids.push_back(id(n));
    return make_signal_set(std::move(ids));
}

void SignalMachine::add_rule(std::initializer_list<std::string_view> inputs,
                             std::initializer_list<std::string_view> outputs) {
    add_rule(CollisionRule{resolve_names({inputs.begin(), inputs.size()}),
                           resolve_names({outputs.begin(), outputs.size()})});
}

void SignalMachine::add_rule(std::span<const std::string> inputs, std::span<const std::string> outputs) {
    std::vector<std::string_view> in(inputs.begin(), inputs.end());
    std::vector<std::string_view> out(outputs.begin(), outputs.end());
    add_rule(CollisionRule{resolve_names(in), resolve_names(out)});
}

void SignalMachine::add_rule(CollisionRule rule) {
    if (rule.inputs.size() < 2) throw std::invalid_argument("collision rule needs at least two inputs");
    if (by_inputs_.contains(rule.inputs)) {
        throw std::invalid_argument("rule already declared on " + describe(rule.inputs));
    }
    by_inputs_.emplace(rule.inputs, rules_.size());
    rules_.push_back(std::move(rule));
}

void SignalMachine::add_crossing(std::initializer_list<std::string_view> inputs) {
    SignalSet set = resolve_names({inputs.begin(), inputs.size()});
    add_rule(CollisionRule{set, set, true});
}

void SignalMachine::set_rule(CollisionRule rule) {
    if (const auto it = by_inputs_.find(rule.inputs); it != by_inputs_.end()) {
        rules_[it->second] = std::move(rule);
        return;
    }
    add_rule(std::move(rule));
}

std::optional<SignalId> SignalMachine::find(std::string_view name) const {
    const auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

SignalId SignalMachine::id(std::string_view name) const {
    if (auto found = find(name)) return *found;
    throw std::out_of_range("undeclared meta-signal '" + std::string(name) + "'");
}

const CollisionRule* SignalMachine::rule_for(const SignalSet& inputs) const {
    const auto it = by_inputs_.find(inputs);
    return it == by_inputs_.end() ? nullptr : &rules_[it->second];
}

std::vector<SignalId> by_speed(const SignalMachine& machine, const SignalSet& set) {
    std::vector<SignalId> out(set.begin(), set.end());
    std::sort(out.begin(), out.end(), [&](SignalId a, SignalId b) {
        const bool a_known = a < machine.size();
        const bool b_known = b < machine.size();
        if (!a_known || !b_known) return std::tie(b_known, a) < std::tie(a_known, b);
        const auto& sa = machine.signal(a);
        const auto& sb = machine.signal(b);
        return std::tie(sa.speed, sa.name) < std::tie(sb.speed, sb.name);
    });
    return out;
}

std::string SignalMachine::describe(const SignalSet& set) const {
    std::string out = "{";
    bool first = true;
    for (SignalId id : by_speed(*this, set)) {
        if (!first) out += ",";
        first = false;
        out += id < signals_.size() ? signals_[id].name : "#" + std::to_string(id);
    }
    return out + "}";
}

namespace {

bool speeds_distinct(const SignalMachine& m, const SignalSet& set) {
    std::set<Rational> seen;
    for (SignalId id : set) {
        if (!seen.insert(m.speed(id)).second) return false;
    }
    return true;
}

bool all_declared(const SignalMachine& m, const SignalSet& set) {
    return std::all_of(set.begin(), set.end(), [&](SignalId id) { return id < m.size(); });
}

}  // namespace

ValidationReport validate_machine(const SignalMachine& machine) {
    ValidationReport report;
    std::set<std::string, std::less<>> names;
    for (const auto& s : machine.signals()) {
        if (s.name.empty()) {
            report.push_back({ViolationKind::EmptyName, "meta-signal with empty name"});
        } else if (!is_identifier(s.name)) {
            report.push_back({ViolationKind::MalformedName, "malformed meta-signal name '" + s.name + "'"});
        }
        if (!names.insert(s.name).second) {
            report.push_back({ViolationKind::DuplicateName, "duplicate meta-signal name '" + s.name + "'"});
        }
    }

    std::set<SignalSet> input_sets;
    for (const auto& rule : machine.rules()) {
        const std::string where = machine.describe(rule.inputs) + " -> " + machine.describe(rule.outputs);
        if (!all_declared(machine, rule.inputs) || !all_declared(machine, rule.outputs)) {
            report.push_back({ViolationKind::UndeclaredSignal, "undeclared meta-signal in rule " + where});
            continue;
        }
        if (rule.inputs.size() < 2) {
            report.push_back({ViolationKind::TooFewInputs, "fewer than two inputs in rule " + where});
        }
        if (!speeds_distinct(machine, rule.inputs)) {
            report.push_back({ViolationKind::NonDistinctInputSpeeds, "non-distinct input speeds in rule " + where});
        }
        if (!speeds_distinct(machine, rule.outputs)) {
            report.push_back({ViolationKind::NonDistinctOutputSpeeds, "non-distinct output speeds in rule " + where});
        }
        if (rule.crossing && !rule.is_blank()) {
            report.push_back({ViolationKind::CrossingChangesSignals, "blank crossing with different outputs " + where});
        }
        if (!input_sets.insert(rule.inputs).second) {
            report.push_back(
                {ViolationKind::DuplicateInputSet, "duplicate rule input set " + machine.describe(rule.inputs)});
        }
    }
    return report;
}

RuleOutcome resolve_rule(const SignalMachine& machine, const SignalSet& inputs) {
    if (inputs.size() < 2) throw std::invalid_argument("a collision needs at least two signals");
    if (!all_declared(machine, inputs)) throw std::invalid_argument("undeclared meta-signal in collision");
    if (!speeds_distinct(machine, inputs)) {
        throw std::invalid_argument("signals of equal speed cannot meet: " + machine.describe(inputs));
    }
    if (const CollisionRule* rule = machine.rule_for(inputs)) {
        const auto index = static_cast<std::size_t>(rule - machine.rules().data());
        return RuleOutcome{rule->outputs, rule->is_blank(), index};
    }
    return RuleOutcome{inputs, true, std::nullopt};
}

MachineStats machine_stats(const SignalMachine& machine) {
    MachineStats stats{machine.size(), 0};
    for (const auto& rule : machine.rules()) {
        if (!rule.crossing) ++stats.non_blank_rules;
    }
    return stats;
}

namespace {

using NamedRule = std::tuple<std::set<std::string>, std::set<std::string>, bool>;

std::set<NamedRule> named_rules(const SignalMachine& m) {
    std::set<NamedRule> out;
    for (const auto& r : m.rules()) {
        NamedRule nr;
        for (auto id : r.inputs) std::get<0>(nr).insert(m.name(id));
        for (auto id : r.outputs) std::get<1>(nr).insert(m.name(id));
        std::get<2>(nr) = r.crossing;
        out.insert(std::move(nr));
    }
    return out;
}

}  // namespace

bool equivalent(const SignalMachine& a, const SignalMachine& b) {
    if (a.size() != b.size()) return false;
    for (const auto& s : a.signals()) {
        const auto other = b.find(s.name);
        if (!other || b.speed(*other) != s.speed) return false;
    }
    return named_rules(a) == named_rules(b);
}

}  // namespace sigmach
