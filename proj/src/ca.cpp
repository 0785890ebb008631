#include "sigmach/ca.hpp"

#include <sstream>
#include <stdexcept>

namespace sigmach::ca {

void check_ca(const CellularAutomaton& ca) {
    if (ca.states < 1 || ca.states > 10) throw std::invalid_argument("state count must be in 1..10");
    if (ca.table.size() != ca.states * ca.states * ca.states)
        throw std::invalid_argument("local table is not total");
    for (State v : ca.table)
        if (v >= ca.states) throw std::invalid_argument("local table value out of range");
}

CellularAutomaton elementary_ca(unsigned rule) {
    if (rule > 255) throw std::invalid_argument("elementary rule must be in 0..255");
    CellularAutomaton ca;
    ca.states = 2;
    ca.table.resize(8);
    for (unsigned i = 0; i < 8; ++i) ca.table[i] = static_cast<State>((rule >> i) & 1U);
    return ca;
}

namespace {

std::vector<std::vector<std::string>> lines_of(std::string_view text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        out.push_back(std::move(tok));
    }
    return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw std::invalid_argument("line " + std::to_string(line) + ": " + what);
}

State digit(std::size_t line, const std::string& tok) {
    if (tok.size() != 1 || tok[0] < '0' || tok[0] > '9') fail(line, "bad state '" + tok + "'");
    return static_cast<State>(tok[0] - '0');
}

std::vector<State> digits(std::size_t line, const std::string& tok) {
    std::vector<State> out;
    for (char c : tok) out.push_back(digit(line, std::string(1, c)));
    return out;
}

}  // namespace

CellularAutomaton parse_ca(std::string_view text) {
    const auto lines = lines_of(text);
    CellularAutomaton ca;
    ca.states = 0;
    std::vector<bool> seen;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto& tok = lines[n];
        if (tok.empty()) continue;
        if (tok[0] == "states") {
            if (ca.states) fail(n + 1, "states given twice");
            if (tok.size() != 2 || tok[1].size() > 2) fail(n + 1, "expected 'states <k>'");
            ca.states = std::stoul(tok[1]);
            if (ca.states < 1 || ca.states > 10) fail(n + 1, "state count must be in 1..10");
            ca.table.assign(ca.states * ca.states * ca.states, 0);
            seen.assign(ca.table.size(), false);
        } else if (tok[0] == "local") {
            if (!ca.states) fail(n + 1, "'local' before 'states'");
            if (tok.size() != 6 || tok[4] != "->") fail(n + 1, "expected 'local s t u -> v'");
            State q[4] = {digit(n + 1, tok[1]), digit(n + 1, tok[2]), digit(n + 1, tok[3]), digit(n + 1, tok[5])};
            for (State s : q)
                if (s >= ca.states) fail(n + 1, "state out of range");
            const std::size_t idx = (q[0] * ca.states + q[1]) * ca.states + q[2];
            if (seen[idx]) fail(n + 1, "local entry given twice");
            seen[idx] = true;
            ca.table[idx] = q[3];
        } else {
            fail(n + 1, "unknown directive '" + tok[0] + "'");
        }
    }
    if (!ca.states) throw std::invalid_argument("missing 'states' line");
    for (bool s : seen)
        if (!s) throw std::invalid_argument("local table is not total");
    return ca;
}

std::string emit_ca(const CellularAutomaton& ca) {
    std::string out = "states " + std::to_string(ca.states) + "\n";
    const std::size_t k = ca.states;
    for (std::size_t s = 0; s < k; ++s)
        for (std::size_t t = 0; t < k; ++t)
            for (std::size_t u = 0; u < k; ++u) {
                out += "local " + std::to_string(s) + " " + std::to_string(t) + " " + std::to_string(u) + " -> " +
                       std::to_string(ca.table[(s * k + t) * k + u]) + "\n";
            }
    return out;
}

State CAWindow::cell(long i) const {
    if (i < a()) {
        const long back = a() - 1 - i;
        const long n = static_cast<long>(left.size());
        return left[n - 1 - back % n];
    }
    if (i > b()) return right[(i - b() - 1) % static_cast<long>(right.size())];
    return cells[i - a()];
}

void check_window(const CAWindow& w, const CellularAutomaton& ca) {
    if (w.cells.empty() || w.left.empty() || w.right.empty())
        throw std::invalid_argument("window cells and background words must be nonempty");
    for (const auto* part : {&w.cells, &w.left, &w.right})
        for (State s : *part)
            if (s >= ca.states) throw std::invalid_argument("window state out of range");
}

CAWindow parse_window(std::string_view text) {
    const auto lines = lines_of(text);
    CAWindow w;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto& tok = lines[n];
        if (tok.empty()) continue;
        if (tok.size() != 2) fail(n + 1, "expected '<directive> <value>'");
        if (tok[0] == "cells") w.cells = digits(n + 1, tok[1]);
        else if (tok[0] == "left") w.left = digits(n + 1, tok[1]);
        else if (tok[0] == "right") w.right = digits(n + 1, tok[1]);
        else if (tok[0] == "origin") {
            try {
                std::size_t used = 0;
                w.origin = std::stol(tok[1], &used);
                if (used != tok[1].size()) throw std::invalid_argument(tok[1]);
            } catch (const std::exception&) {
                fail(n + 1, "bad origin '" + tok[1] + "'");
            }
        } else {
            fail(n + 1, "unknown directive '" + tok[0] + "'");
        }
    }
    if (w.cells.empty() || w.left.empty() || w.right.empty())
        throw std::invalid_argument("window needs 'cells', 'left' and 'right'");
    return w;
}

std::string row_string(const std::vector<State>& row) {
    std::string s;
    for (State q : row) s += static_cast<char>('0' + q);
    return s;
}

std::string emit_window(const CAWindow& w) {
    std::string out;
    if (w.origin != 0) out += "origin " + std::to_string(w.origin) + "\n";
    out += "cells " + row_string(w.cells) + "\nleft " + row_string(w.left) + "\nright " + row_string(w.right) + "\n";
    return out;
}

CARows ca_step_window(const CellularAutomaton& ca, const CAWindow& window, std::size_t steps) {
    const long n = static_cast<long>(steps);
    const long lo = window.a() - 2 * n;
    const long hi = window.b() + 2 * n;
    std::vector<State> row;
    for (long i = lo; i <= hi; ++i) row.push_back(window.cell(i));

    CARows out;
    out.left = window.a() - n;
    auto crop = [&](const std::vector<State>& r, long first) {
        return std::vector<State>(r.begin() + (out.left - first), r.begin() + (window.b() + n - first) + 1);
    };
    long first = lo;
    out.rows.push_back(crop(row, first));
    for (long t = 1; t <= n; ++t) {
        std::vector<State> next;
        for (std::size_t i = 1; i + 1 < row.size(); ++i) next.push_back(ca.apply(row[i - 1], row[i], row[i + 1]));
        row = std::move(next);
        ++first;
        out.rows.push_back(crop(row, first));
    }
    return out;
}

std::string state_name(const CellularAutomaton& ca, State q) {
    if (ca.states == 2) return q ? "one" : "zero";
    return "q" + std::to_string(q);
}

SignalMachine build_ca_machine(const CellularAutomaton& ca) {
    check_ca(ca);
    SignalMachine m;
    const auto k = static_cast<State>(ca.states);
    for (State q = 0; q < k; ++q) m.add_signal(state_name(ca, q), Rational(0));
    for (State q = 0; q < k; ++q) m.add_signal(state_name(ca, q) + "_L", Rational(-1));
    for (State q = 0; q < k; ++q) m.add_signal(state_name(ca, q) + "_R", Rational(1));
    for (State s = 0; s < k; ++s)
        for (State t = 0; t < k; ++t)
            for (State u = 0; u < k; ++u) {
                const State v = ca.apply(s, t, u);
                m.add_rule(CollisionRule{make_signal_set({SignalId(2 * k + s), SignalId(t), SignalId(k + u)}),
                                         make_signal_set({SignalId(k + v), SignalId(v), SignalId(2 * k + v)})});
            }
    return m;
}

Configuration encode_ca_cone(const CellularAutomaton& ca, const CAWindow& window, std::size_t horizon) {
    check_ca(ca);
    check_window(window, ca);
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    const long T = static_cast<long>(horizon);
    const auto k = static_cast<SignalId>(ca.states);
    Configuration c;
    for (long i = window.a() - T; i <= window.b() + T; ++i) {
        const SignalId q = window.cell(i);
        c.place(Rational(i), q);
        c.place(Rational(i) + Rational(1, 4), 2 * k + q);
        c.place(Rational(i) - Rational(1, 4), k + q);
    }
    return c;
}

std::vector<State> decode_ca_row(const SpaceTimeDiagram& diagram, const SignalMachine& machine,
                                 const CellularAutomaton& ca, std::size_t n, const CAWindow& window,
                                 std::size_t horizon) {
    if (n < 1 || n > horizon) throw std::invalid_argument("row index must be in 1..T");
    const Configuration c = config_at(diagram, machine, Rational(static_cast<long>(n)));
    const long T = static_cast<long>(horizon);
    const long s = static_cast<long>(n);
    std::vector<State> row;
    for (long i = window.a() - T + s; i <= window.b() + T - s; ++i) {
        const auto id = c.at(Rational(i));
        if (!id || *id >= ca.states)
            throw std::invalid_argument("no static signal at cell " + std::to_string(i) + ", t=" + std::to_string(n));
        row.push_back(static_cast<State>(*id));
    }
    return row;
}

CASimulation run_ca_simulation(const CellularAutomaton& ca, const CAWindow& window, std::size_t horizon) {
    CASimulation out;
    out.machine = build_ca_machine(ca);
    out.initial = encode_ca_cone(ca, window, horizon);
    RunLimits limits;
    limits.max_time = Rational(static_cast<long>(horizon)) + Rational(1, 2);
    limits.max_collisions = 1'000'000;
    RunOutcome r = run(out.machine, out.initial, limits);
    out.diagram = std::move(r.diagram);
    for (std::size_t n = 1; n <= horizon; ++n)
        out.rows.push_back(decode_ca_row(out.diagram, out.machine, ca, n, window, horizon));
    return out;
}

}  // namespace sigmach::ca
