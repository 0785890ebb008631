#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sigmach/configuration.hpp"
#include "sigmach/engine.hpp"
#include "sigmach/machine.hpp"

namespace sigmach::cts {

// --- reference interpreter ----------------------------------------------------

/// Binary word plus a circular list of binary appendants. The appendant at
/// `halt_index` only marks where the system halts when it is activated; its
/// bits are never appended.
struct CyclicTagSystem {
    std::vector<std::string> appendants;
    std::string word;
    std::optional<std::size_t> halt_index;

    friend bool operator==(const CyclicTagSystem&, const CyclicTagSystem&) = default;
};

/// Throws std::invalid_argument for an empty list, non-binary words or an
/// out-of-range halt index.
void check_system(const CyclicTagSystem& sys);

enum class CtsStatus { StepLimit, HaltEmptyWord, HaltAppendant };

const char* to_string(CtsStatus status);

struct CtsStep {
    /// StepLimit means "not halted".
    CtsStatus status = CtsStatus::StepLimit;
    /// Next system; on HaltAppendant it holds the word after the bit removal.
    CyclicTagSystem system;
};

CtsStep cts_step(const CyclicTagSystem& sys);

struct CtsTrace {
    /// Initial word, then the word after each step (including the final word
    /// of a halt-appendant step).
    std::vector<std::string> words;
    /// Configuration sampled for each boundary word.
    std::vector<Configuration> samples;
    CtsStatus status = CtsStatus::StepLimit;
};

CtsTrace cts_run(const CyclicTagSystem& sys, std::size_t max_steps);

/// Text format: `word <bits|-->`, `appendant <bits|-->` lines, optional
/// `halt <index>`; `#` comments.
CyclicTagSystem parse_cts(std::string_view text);
std::string emit_cts(const CyclicTagSystem& sys);

// --- signal machines ----------------------------------------------------------

enum class CtsVariant {
    /// 13 meta-signals, 21 non-blank rules; halting via the 3-signal rule.
    ThreeSignalHalt,
    /// 15 meta-signals, 24 non-blank rules, only 2-signal collisions.
    TwoSignal,
};

struct CtsMachineOptions {
    CtsVariant variant = CtsVariant::ThreeSignalHalt;
    /// Turn the crossings of right-escaping garbage into destructive rules.
    bool clean = false;
};

/// The cyclic-tag-system machine with its explicit blank crossings.
SignalMachine build_cts_machine(const CtsMachineOptions& options = {});
SignalMachine build_cts_machine_two_signal(bool clean = false);

// --- layout and encoding --------------------------------------------------------

enum class LayoutMode { Dyadic, Integer };

struct BitPlacement {
    Rational position;
    char bit;
};

struct CtsBlock {
    std::size_t appendant = 0;  ///< index in the source list
    Rational left;               ///< `first` or `sep` before the block
    Rational length;             ///< distance to the next `sep` / trailing `last`
    std::vector<BitPlacement> bits;
    bool halt = false;
    std::optional<Rational> halt_position;
};

/// Positions of every signal of an encoded system, left to right.
struct CtsLayout {
    LayoutMode mode = LayoutMode::Dyadic;
    CtsVariant variant = CtsVariant::ThreeSignalHalt;
    Rational left_last;
    Rational go_ll;
    std::vector<BitPlacement> word;
    Rational first;
    std::vector<CtsBlock> blocks;
    std::vector<Rational> separators;
    Rational trailing_last;
};

/// Plans the layout. A one-appendant list with a nonempty word is laid out
/// as two copies of the appendant (the rotation needs a `sep`).
CtsLayout plan_cts_layout(const CyclicTagSystem& sys, LayoutMode mode,
                          CtsVariant variant = CtsVariant::ThreeSignalHalt);

/// Non-halt `one` bits sitting exactly at 2/3 of their block, where the halt
/// collision would fire by mistake.
std::vector<std::string> halt_safety_violations(const CtsLayout& layout);

class HaltSafetyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class HaltSafety { Enforce, Ignore };

/// Initial configuration for `layout` over the meta-signals of `machine`.
/// Throws HaltSafetyError on a misplaced `one` unless told to ignore it.
Configuration encode_cts(const CtsLayout& layout, const SignalMachine& machine,
                         HaltSafety safety = HaltSafety::Enforce);

// --- decoding -------------------------------------------------------------------

/// Static `one`/`zero` signals left of the single `first`. Throws
/// std::invalid_argument when there is no `first` or more than one.
std::string decode_word(const Configuration& config, const SignalMachine& machine);

/// As decode_word, reading left of the leftmost `first`. While a rotation is
/// still travelling right it carries a second `first`, and a run stopped by a
/// halt appendant keeps the old `first` next to the new one.
std::string decode_leading_word(const Configuration& config, const SignalMachine& machine);

struct DecodedBlock {
    std::string bits;               ///< static one/zero, left to right
    std::vector<Rational> offsets;  ///< from the left delimiter
    Rational length;
    bool has_halt_signal = false;  ///< two-signal variant `halt`
};

/// Blocks between the rightmost `first` and the rightmost `last`.
std::vector<DecodedBlock> decode_list(const Configuration& config, const SignalMachine& machine);

// --- simulation -------------------------------------------------------------------

class EngineLimitError : public std::runtime_error {
public:
    EngineLimitError(RunTag tag, const std::string& what) : std::runtime_error(what), tag_(tag) {}
    RunTag tag() const noexcept { return tag_; }

private:
    RunTag tag_;
};

struct SimulationOptions {
    LayoutMode mode = LayoutMode::Dyadic;
    CtsMachineOptions machine;
    HaltSafety safety = HaltSafety::Enforce;
};

struct CtsSimulation {
    /// Word decoded at each iteration boundary (just before go_LL bounces on
    /// the left `last`), plus the final word after a halt-appendant stop.
    std::vector<std::string> words;
    /// Configuration sampled for each boundary word.
    std::vector<Configuration> samples;
    CtsStatus status = CtsStatus::StepLimit;
    bool halt_rule_fired = false;
    SignalMachine machine;
    Configuration initial;
    /// Engine configuration at the end (after the last event when halted).
    Configuration final;
    SpaceTimeDiagram diagram;
};

/// Encodes `sys`, runs the engine and samples the word at each iteration
/// boundary. Stops after `max_iterations` completed iterations or when the
/// engine stabilises. Throws EngineLimitError when `limits` trip first.
CtsSimulation run_cts_simulation(const CyclicTagSystem& sys, const SimulationOptions& options,
                                 std::size_t max_iterations, const RunLimits& limits = {});

struct GeometryCheck {
    /// Boundary samples whose list was fully rotated (no moving signal right
    /// of the leading `first`) and therefore compared.
    std::size_t checked = 0;
    std::vector<std::string> problems;
};

/// After k iterations the list must be the initial blocks rotated by k, each
/// with exactly its initial bit offsets and length; a halt block keeps its
/// signal at exactly 2/3 (or 1/2 for the two-signal variant).
GeometryCheck check_rotation_geometry(const CtsSimulation& sim, const CtsLayout& layout);

/// Collisions the construction never produces in a clean run: a pair left
/// empty in the collision table, or 3+ signals meeting without a declared
/// rule. Messages describe each offending event.
std::vector<std::string> unexpected_collisions(const SpaceTimeDiagram& diagram, const SignalMachine& machine);

}  // namespace sigmach::cts
