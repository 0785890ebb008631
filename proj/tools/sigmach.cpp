#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "sigmach/ca.hpp"
#include "sigmach/cts.hpp"
#include "sigmach/engine.hpp"
#include "sigmach/machine_text.hpp"
#include "sigmach/metrics.hpp"
#include "sigmach/patterns.hpp"
#include "sigmach/svg.hpp"
#include "sigmach/verify.hpp"

using namespace sigmach;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kLimit = 2;
constexpr int kUsage = 64;
constexpr int kIo = 74;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw IoError("cannot write " + path);
}

struct Options {
    std::string machine, init, svg, style, out, cts, ca, window, replay, report;
    std::string layout = "dyadic";
    std::uint64_t max_collisions = RunLimits{}.max_collisions;
    std::string max_time;
    std::uint64_t seed = 1;
    std::size_t count = 1;
    std::size_t horizon = 0;
    std::size_t iterations = 30;
    std::size_t period = 3;
    std::string spacing = "4";
    std::string way_speeds;
    std::string repro;
    unsigned threads = 0;
    bool clean = false;
    bool two_signal = false;
    bool allow_unsafe = false;
};

ParsedMachine load_machine(const Options& o) {
    if (o.machine.empty()) throw UsageError("--machine is required");
    try {
        return parse_machine(read_file(o.machine));
    } catch (const ParseError& e) {
        throw InvalidInput(o.machine + ": " + e.what());
    }
}

void require_valid(const SignalMachine& m) {
    const auto report = validate_machine(m);
    if (report.empty()) return;
    std::string msg;
    for (const auto& v : report) msg += v.message + "\n";
    throw InvalidInput(msg.substr(0, msg.size() - 1));
}

Configuration load_init(const Options& o, const ParsedMachine& pm) {
    if (!o.init.empty()) {
        try {
            return parse_init(read_file(o.init), pm.machine);
        } catch (const ParseError& e) {
            throw InvalidInput(o.init + ": " + e.what());
        }
    }
    if (!pm.init) throw UsageError("no initial configuration: add init lines or pass --init");
    return *pm.init;
}

Rational parse_rational_flag(const std::string& flag, const std::string& text) {
    try {
        return Rational::parse(text);
    } catch (const std::invalid_argument&) {
        throw UsageError("--" + flag + ": not a rational: " + text);
    }
}

RunLimits limits_of(const Options& o) {
    RunLimits limits;
    limits.max_collisions = o.max_collisions;
    if (!o.max_time.empty()) limits.max_time = parse_rational_flag("max-time", o.max_time);
    return limits;
}

int cmd_validate(const Options& o) {
    const auto pm = load_machine(o);
    const auto report = validate_machine(pm.machine);
    for (const auto& v : report) std::cout << v.message << "\n";
    if (!report.empty()) return kInvalid;
    const auto stats = machine_stats(pm.machine);
    std::cout << "valid: " << stats.meta_signals << " meta-signals, " << stats.non_blank_rules << " non-blank rules\n";
    return kOk;
}

int outcome_code(RunTag tag) { return tag == RunTag::Halted ? kOk : kLimit; }

int cmd_run(const Options& o) {
    const auto pm = load_machine(o);
    require_valid(pm.machine);
    const auto init = load_init(o, pm);
    const RunOutcome r = run(pm.machine, init, limits_of(o));
    std::cout << to_string(r.tag) << ", " << r.diagram.events.size() << " collisions\n";
    std::cout << "time_complexity " << time_complexity(r.diagram) << "\n";
    std::cout << "space_cut " << space_cut(r.diagram) << "\n";
    std::cout << "final_time " << r.final_time << "\n";
    std::cout << emit_init(pm.machine, r.final);
    if (!o.svg.empty()) {
        StyleMap style;
        if (!o.style.empty()) style = parse_style(read_file(o.style));
        write_output(o.svg, render_svg(r.diagram, pm.machine, style));
    }
    return outcome_code(r.tag);
}

int cmd_render(const Options& o) {
    if (o.svg.empty()) throw UsageError("--svg is required");
    const auto pm = load_machine(o);
    require_valid(pm.machine);
    const auto init = load_init(o, pm);
    StyleMap style;
    if (!o.style.empty()) {
        try {
            style = parse_style(read_file(o.style));
        } catch (const ParseError& e) {
            throw InvalidInput(o.style + ": " + e.what());
        }
    }
    const RunOutcome r = run(pm.machine, init, limits_of(o));
    write_output(o.svg, render_svg(r.diagram, pm.machine, style));
    std::cout << to_string(r.tag) << ", " << r.diagram.events.size() << " collisions, wrote " << o.svg << "\n";
    return kOk;
}

int cmd_stats(const Options& o) {
    const auto pm = load_machine(o);
    require_valid(pm.machine);
    const auto s = machine_stats(pm.machine);
    std::cout << s.meta_signals << " meta-signals, " << s.non_blank_rules << " non-blank rules\n";
    return kOk;
}

cts::CyclicTagSystem load_cts(const std::string& path) {
    try {
        return cts::parse_cts(read_file(path));
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

cts::SimulationOptions cts_options(const Options& o) {
    cts::SimulationOptions opt;
    if (o.layout == "dyadic") opt.mode = cts::LayoutMode::Dyadic;
    else if (o.layout == "integer") opt.mode = cts::LayoutMode::Integer;
    else throw UsageError("--layout must be dyadic or integer");
    opt.machine.variant = o.two_signal ? cts::CtsVariant::TwoSignal : cts::CtsVariant::ThreeSignalHalt;
    opt.machine.clean = o.clean;
    opt.safety = o.allow_unsafe ? cts::HaltSafety::Ignore : cts::HaltSafety::Enforce;
    return opt;
}

int cmd_encode_cts(const Options& o) {
    if (o.cts.empty()) throw UsageError("--cts is required");
    const auto sys = load_cts(o.cts);
    const auto opt = cts_options(o);
    const auto machine = cts::build_cts_machine(opt.machine);
    const auto layout = cts::plan_cts_layout(sys, opt.mode, opt.machine.variant);
    Configuration init;
    try {
        init = cts::encode_cts(layout, machine, opt.safety);
    } catch (const cts::HaltSafetyError& e) {
        throw InvalidInput(e.what());
    }
    write_output(o.out, emit_machine(machine, init));
    return kOk;
}

ca::CellularAutomaton load_ca(const std::string& path) {
    try {
        return ca::parse_ca(read_file(path));
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

int cmd_encode_ca(const Options& o) {
    if (o.ca.empty() || o.window.empty()) throw UsageError("--ca and --window are required");
    if (o.horizon < 1) throw UsageError("--horizon must be at least 1");
    const auto automaton = load_ca(o.ca);
    ca::CAWindow window;
    try {
        window = ca::parse_window(read_file(o.window));
        ca::check_window(window, automaton);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(o.window + ": " + e.what());
    }
    const auto machine = ca::build_ca_machine(automaton);
    write_output(o.out, emit_machine(machine, ca::encode_ca_cone(automaton, window, o.horizon)));
    return kOk;
}

int cmd_gen_pattern(const Options& o) {
    if (o.period < 1) throw UsageError("--period must be at least 1");
    std::vector<Rational> ways;
    if (!o.way_speeds.empty()) {
        std::istringstream in(o.way_speeds);
        for (std::string tok; std::getline(in, tok, ',');) ways.push_back(parse_rational_flag("unequal", tok));
    }
    const Rational d = parse_rational_flag("spacing", o.spacing);
    patterns::PatternMachine pm;
    try {
        pm = patterns::standalone_pattern(o.period, d, ways);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    write_output(o.out, emit_machine(pm.machine, pm.initial));
    return kOk;
}

int finish_report(const verify::Report& report, const Options& o) {
    const std::string text = report.text();
    if (!o.report.empty()) write_output(o.report, text);
    std::cout << text;
    return report.ok() ? kOk : kInvalid;
}

int cmd_verify_cts(const Options& o) {
    const auto opt = cts_options(o);
    if (!o.replay.empty()) {
        const auto sys = load_cts(o.replay);
        const std::string f = verify::check_cts(sys, opt, o.iterations);
        std::cout << (f.empty() ? "pass" : "FAIL: " + f) << "\n";
        return f.empty() ? kOk : kInvalid;
    }
    if (o.count < 1) throw UsageError("--count must be at least 1");
    verify::CtsBounds bounds;
    bounds.iterations = o.iterations;
    const auto report = verify::verify_cts(o.count, o.seed, opt, bounds, o.threads);
    if (!report.ok()) {
        for (const auto& r : report.results) {
            if (r.failure.empty()) continue;
            const auto repro = verify::shrink_cts(cts::parse_cts(r.instance), opt, o.iterations);
            const std::string path = o.repro.empty() ? "cts-repro.txt" : o.repro;
            write_output(path, "# " + repro.failure + "\n# iterations " + std::to_string(repro.iterations) + "\n" +
                                   cts::emit_cts(repro.system));
            std::cerr << "minimized reproduction written to " << path << "\n";
            break;
        }
    }
    return finish_report(report, o);
}

int cmd_verify_ca(const Options& o) {
    if (!o.replay.empty()) {
        verify::CaInstance inst;
        try {
            inst = verify::parse_ca_instance(read_file(o.replay));
        } catch (const std::invalid_argument& e) {
            throw InvalidInput(o.replay + ": " + e.what());
        }
        const std::string f = verify::check_ca(inst);
        std::cout << (f.empty() ? "pass" : "FAIL: " + f) << "\n";
        return f.empty() ? kOk : kInvalid;
    }
    if (o.count < 1) throw UsageError("--count must be at least 1");
    verify::CaBounds bounds;
    if (o.horizon) bounds.max_horizon = o.horizon;
    const auto report = verify::verify_ca(o.count, o.seed, bounds, o.threads);
    if (!report.ok()) {
        for (const auto& r : report.results) {
            if (r.failure.empty()) continue;
            const auto repro = verify::shrink_ca(verify::parse_ca_instance(r.instance));
            const std::string path = o.repro.empty() ? "ca-repro.txt" : o.repro;
            write_output(path, "# " + repro.failure + "\n" + verify::emit_ca_instance(repro.instance));
            std::cerr << "minimized reproduction written to " << path << "\n";
            break;
        }
    }
    return finish_report(report, o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact signal machine simulator"};
    app.require_subcommand(1);
    Options o;

    auto machine_flags = [&](CLI::App* c) {
        c->add_option("--machine", o.machine, "Machine file");
    };
    auto run_flags = [&](CLI::App* c) {
        machine_flags(c);
        c->add_option("--init", o.init, "Initial configuration file (init lines)");
        c->add_option("--max-collisions", o.max_collisions, "Collision limit");
        c->add_option("--max-time", o.max_time, "Time limit (rational)");
        c->add_option("--style", o.style, "Style file");
    };
    auto cts_flags = [&](CLI::App* c) {
        c->add_option("--layout", o.layout, "dyadic or integer")->check(CLI::IsMember({"dyadic", "integer"}));
        c->add_flag("--clean", o.clean, "Destroy garbage escaping on the right");
        c->add_flag("--two-signal", o.two_signal, "Use the machine with only 2-signal rules");
    };

    auto* validate = app.add_subcommand("validate", "Check machine invariants");
    machine_flags(validate);

    auto* run_cmd = app.add_subcommand("run", "Run a machine and report the outcome");
    run_flags(run_cmd);
    run_cmd->add_option("--svg", o.svg, "Also write the space-time diagram");

    auto* render = app.add_subcommand("render", "Write the space-time diagram as SVG");
    run_flags(render);
    render->add_option("--svg", o.svg, "Output SVG file");

    auto* stats = app.add_subcommand("stats", "Count meta-signals and non-blank rules");
    machine_flags(stats);

    auto* encode_cts = app.add_subcommand("encode-cts", "Machine and initial configuration for a cyclic tag system");
    encode_cts->add_option("--cts", o.cts, "Cyclic tag system file");
    cts_flags(encode_cts);
    encode_cts->add_flag("--allow-unsafe", o.allow_unsafe, "Keep ones that sit at 2/3 of their block");
    encode_cts->add_option("--out", o.out, "Output file (default stdout)");

    auto* encode_ca = app.add_subcommand("encode-ca", "Machine and cone configuration for a cellular automaton");
    encode_ca->add_option("--ca", o.ca, "Automaton file");
    encode_ca->add_option("--window", o.window, "Window file");
    encode_ca->add_option("--horizon", o.horizon, "Number of steps T");
    encode_ca->add_option("--out", o.out, "Output file (default stdout)");

    auto* gen = app.add_subcommand("gen-pattern", "Periodic pattern generator machine");
    gen->add_option("--period", o.period, "Number of emitted signals k");
    gen->add_option("--spacing", o.spacing, "Initial border distance d (rational)");
    gen->add_option("--unequal", o.way_speeds, "Comma-separated bouncer speeds, one per emitted signal");
    gen->add_option("--out", o.out, "Output file (default stdout)");

    auto* vcts = app.add_subcommand("verify-cts", "Random cyclic tag systems against the reference interpreter");
    cts_flags(vcts);
    vcts->add_option("--count", o.count, "Number of instances");
    vcts->add_option("--seed", o.seed, "Suite seed");
    vcts->add_option("--iterations", o.iterations, "Iterations per instance");
    vcts->add_option("--threads", o.threads, "Worker threads (0: all cores)");
    vcts->add_option("--replay", o.replay, "Check one system file instead");
    vcts->add_option("--repro", o.repro, "Where to write a minimized failing instance");
    vcts->add_option("--report", o.report, "Also write the report to a file");

    auto* vca = app.add_subcommand("verify-ca", "Random cellular automata against the reference interpreter");
    vca->add_option("--count", o.count, "Number of instances");
    vca->add_option("--seed", o.seed, "Suite seed");
    vca->add_option("--horizon", o.horizon, "Largest horizon T (default 8)");
    vca->add_option("--threads", o.threads, "Worker threads (0: all cores)");
    vca->add_option("--replay", o.replay, "Check one instance file instead");
    vca->add_option("--repro", o.repro, "Where to write a minimized failing instance");
    vca->add_option("--report", o.report, "Also write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*run_cmd) return cmd_run(o);
        if (*render) return cmd_render(o);
        if (*stats) return cmd_stats(o);
        if (*encode_cts) return cmd_encode_cts(o);
        if (*encode_ca) return cmd_encode_ca(o);
        if (*gen) return cmd_gen_pattern(o);
        if (*vcts) return cmd_verify_cts(o);
        if (*vca) return cmd_verify_ca(o);
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kUsage;
}
