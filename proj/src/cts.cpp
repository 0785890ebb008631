#include "sigmach/cts.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <utility>

namespace sigmach::cts {

namespace {

bool is_binary(const std::string& w) {
    return std::all_of(w.begin(), w.end(), [](char c) { return c == '0' || c == '1'; });
}

}  // namespace

void check_system(const CyclicTagSystem& sys) {
    if (sys.appendants.empty()) throw std::invalid_argument("empty appendant list");
    if (!is_binary(sys.word)) throw std::invalid_argument("word is not binary: " + sys.word);
    for (const auto& a : sys.appendants)
        if (!is_binary(a)) throw std::invalid_argument("appendant is not binary: " + a);
    if (sys.halt_index && *sys.halt_index >= sys.appendants.size())
        throw std::invalid_argument("halt index out of range");
}

const char* to_string(CtsStatus status) {
    switch (status) {
        case CtsStatus::StepLimit: return "StepLimit";
        case CtsStatus::HaltEmptyWord: return "HaltEmptyWord";
        case CtsStatus::HaltAppendant: return "HaltAppendant";
    }
    return "?";
}

CtsStep cts_step(const CyclicTagSystem& sys) {
    CtsStep r;
    r.system = sys;
    if (sys.word.empty()) {
        r.status = CtsStatus::HaltEmptyWord;
        return r;
    }
    const char bit = sys.word.front();
    r.system.word.erase(0, 1);
    if (bit == '1') {
        if (sys.halt_index && *sys.halt_index == 0) {
            r.status = CtsStatus::HaltAppendant;
            return r;
        }
        r.system.word += sys.appendants.front();
    }
    auto& list = r.system.appendants;
    std::rotate(list.begin(), list.begin() + 1, list.end());
    if (sys.halt_index) {
        const std::size_t n = list.size();
        r.system.halt_index = (*sys.halt_index + n - 1) % n;
    }
    return r;
}

CtsTrace cts_run(const CyclicTagSystem& sys, std::size_t max_steps) {
    CtsTrace trace;
    trace.words.push_back(sys.word);
    CyclicTagSystem cur = sys;
    for (std::size_t i = 0; i < max_steps; ++i) {
        CtsStep s = cts_step(cur);
        if (s.status == CtsStatus::HaltEmptyWord) {
            trace.status = s.status;
            return trace;
        }
        trace.words.push_back(s.system.word);
        if (s.status == CtsStatus::HaltAppendant) {
            trace.status = s.status;
            return trace;
        }
        cur = std::move(s.system);
    }
    // A word that is empty right at the limit is still a halt.
    if (cur.word.empty()) trace.status = CtsStatus::HaltEmptyWord;
    return trace;
}

CyclicTagSystem parse_cts(std::string_view text) {
    CyclicTagSystem sys;
    bool have_word = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto bits = [&]() -> std::string {
            if (tok.size() == 1) return "";
            if (tok.size() != 2) fail("expected one operand after '" + tok[0] + "'");
            if (tok[1] == "--") return "";
            if (!is_binary(tok[1])) fail("not a binary word: " + tok[1]);
            return tok[1];
        };
        if (tok[0] == "word") {
            if (have_word) fail("word given twice");
            sys.word = bits();
            have_word = true;
        } else if (tok[0] == "appendant") {
            sys.appendants.push_back(bits());
        } else if (tok[0] == "halt") {
            if (tok.size() != 2) fail("expected 'halt <index>'");
            if (sys.halt_index) fail("halt given twice");
            std::size_t idx = 0;
            try {
                std::size_t used = 0;
                idx = std::stoul(tok[1], &used);
                if (used != tok[1].size()) throw std::invalid_argument(tok[1]);
            } catch (const std::exception&) {
                fail("bad halt index: " + tok[1]);
            }
            sys.halt_index = idx;
        } else {
            fail("unknown directive '" + tok[0] + "'");
        }
    }
    if (!have_word) throw std::invalid_argument("missing 'word' line");
    check_system(sys);
    return sys;
}

std::string emit_cts(const CyclicTagSystem& sys) {
    std::string out = "word " + (sys.word.empty() ? std::string("--") : sys.word) + "\n";
    for (const auto& a : sys.appendants) out += "appendant " + (a.empty() ? std::string("--") : a) + "\n";
    if (sys.halt_index) out += "halt " + std::to_string(*sys.halt_index) + "\n";
    return out;
}

// --- machines -----------------------------------------------------------------

namespace {

void add_common(SignalMachine& m) {
    m.add_signal("go_LL", Rational(-2));
    for (const char* n : {"zero", "one", "first", "sep", "last"}) m.add_signal(n, Rational(0));
    for (const char* n : {"zero_R", "one_R", "false_R", "true_R"}) m.add_signal(n, Rational(1));
    for (const char* n : {"zero_RR", "one_RR", "go_RR"}) m.add_signal(n, Rational(2));

    m.add_rule({"go_RR", "zero"}, {"last", "zero_R"});
    m.add_rule({"go_RR", "one"}, {"last", "one_R"});
    m.add_rule({"go_RR", "first"}, {"first"});
    m.add_rule({"one_RR", "zero"}, {"zero", "zero_R", "one_RR"});
    m.add_rule({"one_RR", "one"}, {"one", "one_R", "one_RR"});
    m.add_rule({"one_RR", "sep"}, {"go_LL", "last", "false_R"});
    m.add_rule({"zero_RR", "zero"}, {"zero_R", "zero_RR"});
    m.add_rule({"zero_RR", "one"}, {"one_R", "zero_RR"});
    m.add_rule({"zero_RR", "sep"}, {"go_LL", "last", "false_R"});
    m.add_rule({"true_R", "last"}, {"first", "false_R"});
    m.add_rule({"false_R", "first"}, {"sep", "go_RR"});
    m.add_rule({"false_R", "last"}, {"first", "one_R"});
    m.add_rule({"false_R", "go_LL"}, {"go_LL", "true_R"});
    m.add_rule({"one_R", "first"}, {"first", "true_R", "one_RR"});
    m.add_rule({"zero_R", "first"}, {"first", "false_R", "zero_RR"});
    m.add_rule({"go_LL", "first"}, {"go_LL"});
    m.add_rule({"go_LL", "last"}, {"go_RR"});
    m.add_rule({"go_RR", "one_R"}, {"last"});
    m.add_rule({"go_RR", "false_R"}, {"zero", "go_RR"});
    m.add_rule({"go_RR", "true_R"}, {"one", "go_RR"});

    auto blank = [&m](std::initializer_list<std::string_view> in) { m.add_crossing(in); };
    for (const char* s : {"zero", "one", "go_LL"}) blank({"true_R", s});
    for (const char* s : {"zero", "one", "sep"}) blank({"false_R", s});
    for (const char* r : {"one_R", "zero_R"})
        for (const char* s : {"zero", "one", "sep", "last", "go_LL"}) blank({r, s});
    blank({"go_LL", "zero"});
    blank({"go_LL", "one"});
    for (const char* rr : {"one_RR", "zero_RR"})
        for (const char* r : {"one_R", "false_R", "true_R"}) blank({rr, r});
    for (const char* r : {"zero_R", "one_R"})
        for (const char* s : {"zero", "one"}) blank({r, s, "go_LL"});
}

void apply_clean(SignalMachine& m) {
    for (const char* rr : {"one_RR", "zero_RR"})
        m.set_rule(CollisionRule{make_signal_set({m.id(rr), m.id("one_R")}), make_signal_set({m.id("one_R")})});
}

}  // namespace

SignalMachine build_cts_machine(const CtsMachineOptions& options) {
    if (options.variant == CtsVariant::TwoSignal) return build_cts_machine_two_signal(options.clean);
    SignalMachine m;
    add_common(m);
    m.add_rule({"true_R", "one", "go_LL"}, {"true_R"});
    if (options.clean) apply_clean(m);
    return m;
}

SignalMachine build_cts_machine_two_signal(bool clean) {
    SignalMachine m;
    add_common(m);
    m.add_signal("halt", Rational(0));
    m.add_signal("halt_R", Rational(1));
    // halt travels through the rotation like a one, minus the lattice signals.
    m.add_rule({"one_RR", "halt"}, {"halt", "halt_R", "one_RR"});
    m.add_rule({"zero_RR", "halt"}, {"halt_R", "zero_RR"});
    m.add_rule({"go_RR", "halt_R"}, {"halt", "go_RR"});
    // Reached in copy mode: the returning go_LL dies and nothing restarts.
    m.add_rule({"go_LL", "halt"}, {"halt"});
    if (clean) apply_clean(m);
    return m;
}

// --- layout ---------------------------------------------------------------------

CtsLayout plan_cts_layout(const CyclicTagSystem& sys, LayoutMode mode, CtsVariant variant) {
    check_system(sys);
    struct Plan {
        std::size_t index;
        bool halt;
    };
    std::vector<Plan> plan;
    for (std::size_t i = 0; i < sys.appendants.size(); ++i) plan.push_back({i, sys.halt_index == i});
    if (plan.size() == 1 && !sys.word.empty()) plan.push_back(plan.front());

    CtsLayout L;
    L.mode = mode;
    L.variant = variant;
    L.left_last = Rational(-1);
    const long n = static_cast<long>(sys.word.size());
    for (long j = 0; j < n; ++j) L.word.push_back({Rational(j + 1), sys.word[j]});
    L.first = Rational(n + 1);
    L.go_ll = (n > 0 ? Rational(1) : L.first) - Rational(1, 5);

    std::size_t longest = 1;
    for (const auto& p : plan)
        if (!p.halt) longest = std::max(longest, sys.appendants[p.index].size());
    Rational dyadic(1);
    for (std::size_t i = 0; i < longest; ++i) dyadic *= Rational(2);

    Rational cursor = L.first;
    for (std::size_t b = 0; b < plan.size(); ++b) {
        CtsBlock block;
        block.appendant = plan[b].index;
        block.halt = plan[b].halt;
        block.left = cursor;
        const std::string& bits = sys.appendants[plan[b].index];
        if (mode == LayoutMode::Dyadic) {
            block.length = dyadic;
        } else if (block.halt) {
            block.length = Rational(variant == CtsVariant::TwoSignal ? 2 : 3);
        } else {
            block.length = Rational(static_cast<long>(bits.size()) + 1);
        }
        if (block.halt) {
            block.halt_position = cursor + block.length * (variant == CtsVariant::TwoSignal ? Rational(1, 2)
                                                                                           : Rational(2, 3));
        } else {
            Rational frac(1, 2);
            for (std::size_t j = 0; j < bits.size(); ++j) {
                const Rational offset = mode == LayoutMode::Dyadic
                                            ? block.length * (Rational(1) - frac)
                                            : Rational(static_cast<long>(j) + 1);
                block.bits.push_back({cursor + offset, bits[j]});
                frac /= Rational(2);
            }
        }
        cursor += block.length;
        if (b + 1 < plan.size()) L.separators.push_back(cursor);
        L.blocks.push_back(std::move(block));
    }
    L.trailing_last = cursor;
    return L;
}

std::vector<std::string> halt_safety_violations(const CtsLayout& layout) {
    std::vector<std::string> out;
    if (layout.variant == CtsVariant::TwoSignal) return out;
    for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
        const CtsBlock& block = layout.blocks[b];
        if (block.halt) continue;
        const Rational danger = block.left + block.length * Rational(2, 3);
        for (const auto& p : block.bits)
            if (p.bit == '1' && p.position == danger)
                out.push_back("block " + std::to_string(b) + " (appendant " + std::to_string(block.appendant) +
                              "): one at " + p.position.str() + " is at 2/3 of [" + block.left.str() + ", " +
                              (block.left + block.length).str() + "]");
    }
    return out;
}

Configuration encode_cts(const CtsLayout& layout, const SignalMachine& machine, HaltSafety safety) {
    if (safety == HaltSafety::Enforce) {
        auto v = halt_safety_violations(layout);
        if (!v.empty()) throw HaltSafetyError("halt-safety violation, use the dyadic layout: " + v.front());
    }
    Configuration c;
    auto bit_signal = [&](char bit) { return machine.id(bit == '1' ? "one" : "zero"); };
    c.place(layout.left_last, machine.id("last"));
    c.place(layout.go_ll, machine.id("go_LL"));
    for (const auto& p : layout.word) c.place(p.position, bit_signal(p.bit));
    c.place(layout.first, machine.id("first"));
    for (const auto& block : layout.blocks) {
        for (const auto& p : block.bits) c.place(p.position, bit_signal(p.bit));
        if (block.halt_position)
            c.place(*block.halt_position,
                    machine.id(layout.variant == CtsVariant::TwoSignal ? "halt" : "one"));
    }
    for (const auto& s : layout.separators) c.place(s, machine.id("sep"));
    c.place(layout.trailing_last, machine.id("last"));
    return c;
}

// --- decoding -------------------------------------------------------------------

namespace {

std::string read_bits_before(const Configuration& config, const SignalMachine& machine, const Rational& limit) {
    const SignalId one = machine.id("one");
    const SignalId zero = machine.id("zero");
    std::string w;
    for (const auto& [x, s] : config) {
        if (x >= limit) break;
        if (s == one) w += '1';
        else if (s == zero) w += '0';
    }
    return w;
}

std::vector<Rational> positions_of(const Configuration& config, SignalId id) {
    std::vector<Rational> out;
    for (const auto& [x, s] : config)
        if (s == id) out.push_back(x);
    return out;
}

}  // namespace

std::string decode_word(const Configuration& config, const SignalMachine& machine) {
    const auto firsts = positions_of(config, machine.id("first"));
    if (firsts.empty()) throw std::invalid_argument("no first signal in configuration");
    if (firsts.size() > 1) throw std::invalid_argument("several first signals in configuration");
    return read_bits_before(config, machine, firsts.front());
}

std::string decode_leading_word(const Configuration& config, const SignalMachine& machine) {
    const auto firsts = positions_of(config, machine.id("first"));
    if (firsts.empty()) throw std::invalid_argument("no first signal in configuration");
    return read_bits_before(config, machine, firsts.front());
}

std::vector<DecodedBlock> decode_list(const Configuration& config, const SignalMachine& machine) {
    const auto firsts = positions_of(config, machine.id("first"));
    const auto lasts = positions_of(config, machine.id("last"));
    if (firsts.empty() || lasts.empty() || lasts.back() <= firsts.back())
        throw std::invalid_argument("no list between first and last");
    const SignalId one = machine.id("one");
    const SignalId zero = machine.id("zero");
    const SignalId sep = machine.id("sep");
    const auto halt = machine.find("halt");

    std::vector<DecodedBlock> out;
    DecodedBlock cur;
    Rational left = firsts.back();
    for (auto it = config.placements().upper_bound(left); it != config.end(); ++it) {
        const auto& [x, s] = *it;
        if (x > lasts.back()) break;
        if (s == sep || x == lasts.back()) {
            cur.length = x - left;
            out.push_back(std::move(cur));
            cur = DecodedBlock{};
            left = x;
        } else if (s == one || s == zero) {
            cur.bits += s == one ? '1' : '0';
            cur.offsets.push_back(x - left);
        } else if (halt && s == *halt) {
            cur.has_halt_signal = true;
            cur.offsets.push_back(x - left);
        }
    }
    return out;
}

// --- simulation ------------------------------------------------------------------

CtsSimulation run_cts_simulation(const CyclicTagSystem& sys, const SimulationOptions& options,
                                 std::size_t max_iterations, const RunLimits& limits) {
    CtsSimulation out;
    out.machine = build_cts_machine(options.machine);
    const CtsLayout layout = plan_cts_layout(sys, options.mode, options.machine.variant);
    out.initial = encode_cts(layout, out.machine, options.safety);

    const SignalMachine& m = out.machine;
    const SignalSet bounce = make_signal_set({m.id("go_LL"), m.id("last")});
    const SignalSet halting = options.machine.variant == CtsVariant::TwoSignal
                                  ? make_signal_set({m.id("go_LL"), m.id("halt")})
                                  : make_signal_set({m.id("true_R"), m.id("one"), m.id("go_LL")});

    Simulator sim(m, out.initial);
    AccumulationGuard guard(limits.accumulation);
    std::optional<Rational> horizon;
    bool limited = false;
    while (true) {
        const auto& batch = sim.peek();
        if (!batch) break;
        if (limits.max_time && batch->time >= *limits.max_time)
            throw EngineLimitError(RunTag::TimeLimit, "time limit reached at t=" + sim.now().str());
        if (sim.events().size() >= limits.max_collisions)
            throw EngineLimitError(RunTag::CollisionLimit,
                                   "collision limit reached after " + std::to_string(sim.events().size()) + " events");
        const bool is_bounce = std::any_of(batch->groups.begin(), batch->groups.end(),
                                           [&](const MeetingGroup& g) { return g.inputs == bounce; });
        if (is_bounce) {
            const Rational t = midpoint(sim.now(), batch->time);
            out.samples.push_back(sim.configuration_at(t));
            out.words.push_back(decode_leading_word(out.samples.back(), m));
            if (out.words.size() == max_iterations + 1 && !out.words.back().empty()) {
                horizon = t;
                limited = true;
                out.final = out.samples.back();
                break;
            }
        }
        const Rational time = batch->time;
        const Rational lo = batch->groups.front().position;
        const Rational hi = batch->groups.back().position;
        const std::size_t before = sim.events().size();
        sim.step();
        for (std::size_t i = before; i < sim.events().size(); ++i)
            if (sim.events()[i].inputs == halting) out.halt_rule_fired = true;
        if (guard.observe(time, lo, hi))
            throw EngineLimitError(RunTag::AccumulationSuspected,
                                   "accumulation suspected near t=" + time.str());
    }

    if (!limited) {
        out.final = sim.configuration_at(sim.now() + Rational(1));
        if (out.halt_rule_fired) {
            out.status = CtsStatus::HaltAppendant;
            out.words.push_back(decode_leading_word(out.final, m));
        } else if (!out.words.empty() && out.words.back().empty()) {
            out.status = CtsStatus::HaltEmptyWord;
        } else {
            throw std::logic_error("engine stabilised without a halting condition");
        }
    }
    out.diagram = std::move(sim).finish(horizon);
    return out;
}

GeometryCheck check_rotation_geometry(const CtsSimulation& sim, const CtsLayout& layout) {
    GeometryCheck out;
    const SignalMachine& m = sim.machine;
    const SignalId first = m.id("first");
    const std::size_t n = layout.blocks.size();
    for (std::size_t k = 0; k < sim.samples.size(); ++k) {
        const Configuration& c = sim.samples[k];
        std::optional<Rational> lead;
        bool settled = true;
        for (const auto& [x, s] : c) {
            if (!lead) {
                if (s == first) lead = x;
            } else if (!m.speed(s).is_zero()) {
                settled = false;
                break;
            }
        }
        if (!lead || !settled) continue;
        ++out.checked;
        const auto blocks = decode_list(c, m);
        const std::string at = "iteration " + std::to_string(k) + ": ";
        if (blocks.size() != n) {
            out.problems.push_back(at + std::to_string(blocks.size()) + " blocks instead of " + std::to_string(n));
            continue;
        }
        for (std::size_t b = 0; b < n; ++b) {
            const CtsBlock& want = layout.blocks[(b + k) % n];
            const DecodedBlock& got = blocks[b];
            std::string bits;
            std::vector<Rational> offsets;
            for (const auto& p : want.bits) {
                bits += p.bit;
                offsets.push_back(p.position - want.left);
            }
            if (want.halt_position) {
                offsets.push_back(*want.halt_position - want.left);
                if (layout.variant == CtsVariant::ThreeSignalHalt) bits += '1';
            }
            const bool halt_ok = !want.halt || layout.variant == CtsVariant::ThreeSignalHalt || got.has_halt_signal;
            if (got.bits != bits || got.offsets != offsets || got.length != want.length || !halt_ok)
                out.problems.push_back(at + "block " + std::to_string(b) + " does not match appendant " +
                                       std::to_string(want.appendant));
        }
    }
    return out;
}

std::vector<std::string> unexpected_collisions(const SpaceTimeDiagram& diagram, const SignalMachine& machine) {
    static constexpr std::array<std::pair<const char*, const char*>, 15> never{{
        {"go_RR", "sep"},    {"go_RR", "last"},    {"go_RR", "go_LL"},    {"go_RR", "zero_R"},
        {"one_RR", "first"}, {"one_RR", "last"},   {"one_RR", "go_LL"},   {"one_RR", "zero_R"},
        {"zero_RR", "first"}, {"zero_RR", "last"}, {"zero_RR", "go_LL"},  {"zero_RR", "zero_R"},
        {"true_R", "first"}, {"true_R", "sep"},    {"go_LL", "sep"},
    }};
    std::set<SignalSet> bad;
    for (const auto& [a, b] : never) bad.insert(make_signal_set({machine.id(a), machine.id(b)}));

    std::vector<std::string> out;
    for (const auto& e : diagram.events) {
        const bool undeclared_multi = e.inputs.size() >= 3 && !machine.rule_for(e.inputs);
        if (undeclared_multi || bad.count(e.inputs))
            out.push_back("event " + std::to_string(e.id) + " " + machine.describe(e.inputs) + " at (" +
                          e.position.str() + ", " + e.time.str() + ")");
    }
    return out;
}

}  // namespace sigmach::cts
