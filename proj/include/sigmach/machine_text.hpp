#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sigmach/configuration.hpp"
#include "sigmach/machine.hpp"

namespace sigmach {

/// Syntax error in the machine text format, carrying a 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ParsedMachine {
    SignalMachine machine;
    /// Present when the text had at least one `init` line.
    std::optional<Configuration> init;
};

/// Reads the line format
///
///     speed <name> <rational>
///     rule <name> <name>+ -> <name>*
///     blank <name> <name>+
///     init <rational> <name>
///
/// with `#` comments. Declarations may appear in any order. Semantic problems
/// a validator can describe (equal speeds, repeated input sets) are kept in
/// the returned machine; only malformed text raises ParseError.
ParsedMachine parse_machine(std::string_view text);

/// Reads `init` lines (comments allowed) against an existing machine.
Configuration parse_init(std::string_view text, const SignalMachine& machine);

/// Canonical text: `speed` lines by (speed, name), `rule` lines with members by
/// speed and rules sorted, `init` lines by position.
std::string emit_machine(const SignalMachine& machine, const std::optional<Configuration>& config = std::nullopt);

std::string emit_init(const SignalMachine& machine, const Configuration& config);

}  // namespace sigmach
