#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigmach/rational.hpp"

namespace sigmach {

/// Index of a meta-signal inside its machine.
using SignalId = std::uint32_t;

/// Set of meta-signals, stored sorted by id without repetition.
using SignalSet = std::vector<SignalId>;

/// Sorts `ids` and throws std::invalid_argument if an id is repeated.
SignalSet make_signal_set(std::vector<SignalId> ids);

struct MetaSignal {
    std::string name;
    Rational speed;

    friend bool operator==(const MetaSignal&, const MetaSignal&) = default;
};

struct CollisionRule {
    SignalSet inputs;
    SignalSet outputs;
    /// Declared as a blank crossing (`---` in a collision table). Such rules
    /// are not counted by machine_stats; outputs must equal inputs.
    bool crossing = false;

    /// Blank rules let the incoming signals cross unchanged.
    bool is_blank() const { return inputs == outputs; }

    friend bool operator==(const CollisionRule&, const CollisionRule&) = default;
};

/// Meta-signals with speeds plus a collision-rule function (a partial
/// function on input sets; undeclared sets are blank).
///
/// The raw constructor accepts anything so that `validate_machine` can report
/// the problems; the `add_*` helpers reject malformed input immediately.
class SignalMachine {
public:
    SignalMachine() = default;
    SignalMachine(std::vector<MetaSignal> signals, std::vector<CollisionRule> rules);

    SignalId add_signal(std::string name, Rational speed);
    void add_rule(std::initializer_list<std::string_view> inputs,
                  std::initializer_list<std::string_view> outputs);
    void add_rule(std::span<const std::string> inputs, std::span<const std::string> outputs);
    void add_rule(CollisionRule rule);
    /// Declares an explicit blank crossing on `inputs`.
    void add_crossing(std::initializer_list<std::string_view> inputs);

    /// Replaces the outputs of the rule declared on `inputs`, or declares it.
    void set_rule(CollisionRule rule);

    std::size_t size() const noexcept { return signals_.size(); }
    const std::vector<MetaSignal>& signals() const noexcept { return signals_; }
    const std::vector<CollisionRule>& rules() const noexcept { return rules_; }
    const MetaSignal& signal(SignalId id) const { return signals_.at(id); }
    const Rational& speed(SignalId id) const { return signals_.at(id).speed; }
    const std::string& name(SignalId id) const { return signals_.at(id).name; }

    std::optional<SignalId> find(std::string_view name) const;
    /// Throws std::out_of_range for an undeclared name.
    SignalId id(std::string_view name) const;

    /// Declared rule on exactly this input set, if any.
    const CollisionRule* rule_for(const SignalSet& inputs) const;

    /// "{a,b}" with members ordered by (speed, name).
    std::string describe(const SignalSet& set) const;

private:
    SignalSet resolve_names(std::span<const std::string_view> names) const;
    void reindex();

    std::vector<MetaSignal> signals_;
    std::vector<CollisionRule> rules_;
    std::map<std::string, SignalId, std::less<>> by_name_;
    std::map<SignalSet, std::size_t> by_inputs_;
};

enum class ViolationKind {
    EmptyName,
    MalformedName,
    DuplicateName,
    UndeclaredSignal,
    TooFewInputs,
    NonDistinctInputSpeeds,
    NonDistinctOutputSpeeds,
    DuplicateInputSet,
    CrossingChangesSignals,
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Lists every broken machine invariant; an empty report means valid.
ValidationReport validate_machine(const SignalMachine& machine);

/// `[A-Za-z_][A-Za-z0-9_]*`
bool is_identifier(std::string_view name);

struct RuleOutcome {
    SignalSet outputs;
    bool blank = false;
    /// Index into SignalMachine::rules() when a rule was declared.
    std::optional<std::size_t> rule;
};

/// Rule lookup with blank-rule semantics: an undeclared input set crosses
/// unchanged. Throws std::invalid_argument when fewer than two inputs are
/// given or two inputs share a speed.
RuleOutcome resolve_rule(const SignalMachine& machine, const SignalSet& inputs);

/// Rules are counted as in a collision table: every declared rule except the
/// explicit blank crossings. A rule whose output set happens to equal its
/// inputs (a quiescent cellular-automaton transition) still counts.
struct MachineStats {
    std::size_t meta_signals = 0;
    std::size_t non_blank_rules = 0;

    friend bool operator==(const MachineStats&, const MachineStats&) = default;
};

MachineStats machine_stats(const SignalMachine& machine);

/// Same named meta-signals with the same speeds and the same rules, ignoring
/// declaration order.
bool equivalent(const SignalMachine& a, const SignalMachine& b);

/// Sorts a set by (speed, name), the order used for display and emission.
std::vector<SignalId> by_speed(const SignalMachine& machine, const SignalSet& set);

}  // namespace sigmach
