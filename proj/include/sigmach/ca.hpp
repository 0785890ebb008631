#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sigmach/configuration.hpp"
#include "sigmach/engine.hpp"
#include "sigmach/machine.hpp"

namespace sigmach::ca {

using State = std::uint8_t;

/// Radius-1 cellular automaton over states 0..states-1.
struct CellularAutomaton {
    std::size_t states = 2;
    /// f(s, t, u) at index (s * states + t) * states + u.
    std::vector<State> table;

    State apply(State left, State centre, State right) const {
        return table[(left * states + centre) * states + right];
    }

    friend bool operator==(const CellularAutomaton&, const CellularAutomaton&) = default;
};

/// Throws std::invalid_argument unless 1 <= states <= 10 and the table is
/// total over states^3 with values in range.
void check_ca(const CellularAutomaton& ca);

/// Two-state automaton in Wolfram numbering: f(l, c, r) is bit 4l + 2c + r.
CellularAutomaton elementary_ca(unsigned rule);

/// `states <k>` then `local s t u -> v` lines; `#` comments.
CellularAutomaton parse_ca(std::string_view text);
std::string emit_ca(const CellularAutomaton& ca);

/// Finite window of cells at [origin, origin + cells.size() - 1] framed by
/// ...uuu on the left and vvv... on the right.
struct CAWindow {
    long origin = 0;
    std::vector<State> cells;
    std::vector<State> left;
    std::vector<State> right;

    long a() const { return origin; }
    long b() const { return origin + static_cast<long>(cells.size()) - 1; }
    /// State of any cell of the framed configuration.
    State cell(long i) const;

    friend bool operator==(const CAWindow&, const CAWindow&) = default;
};

void check_window(const CAWindow& w, const CellularAutomaton& ca);

/// `cells <digits>`, `left <digits>`, `right <digits>`, optional `origin <n>`.
CAWindow parse_window(std::string_view text);
std::string emit_window(const CAWindow& w);

std::string row_string(const std::vector<State>& row);

struct CARows {
    long left = 0;  ///< position of rows[t][0]
    std::vector<std::vector<State>> rows;
};

/// Rows 0..n of the framed configuration over [a - n, b + n]; every cell is
/// exact (computed on a wider strip internally).
CARows ca_step_window(const CellularAutomaton& ca, const CAWindow& window, std::size_t steps);

/// Meta-signal names: `zero`/`one` for two states, `q0`... otherwise, with
/// `_L` (speed -1) and `_R` (speed 1) movers.
std::string state_name(const CellularAutomaton& ca, State q);

/// 3|Q| meta-signals (static q is id q, q_L is |Q|+q, q_R is 2|Q|+q) and
/// one rule {s_R, t, u_L} -> {v_L, v, v_R} per table entry.
SignalMachine build_ca_machine(const CellularAutomaton& ca);

/// Cells [a - T, b + T]: q at i, q_R at i + 1/4, q_L at i - 1/4.
Configuration encode_ca_cone(const CellularAutomaton& ca, const CAWindow& window, std::size_t horizon);

/// Static signals at t = n over [a - T + n, b + T - n]. Throws
/// std::invalid_argument when a cell carries no static signal.
std::vector<State> decode_ca_row(const SpaceTimeDiagram& diagram, const SignalMachine& machine,
                                 const CellularAutomaton& ca, std::size_t n, const CAWindow& window,
                                 std::size_t horizon);

struct CASimulation {
    SignalMachine machine;
    Configuration initial;
    SpaceTimeDiagram diagram;
    /// Decoded rows 1..T; rows[n - 1] covers [a - T + n, b + T - n].
    std::vector<std::vector<State>> rows;
};

/// Encodes the cone, runs the engine up to t = T + 1/2 and decodes rows.
CASimulation run_ca_simulation(const CellularAutomaton& ca, const CAWindow& window, std::size_t horizon);

}  // namespace sigmach::ca
