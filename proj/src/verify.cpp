#include "sigmach/verify.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

namespace sigmach::verify {

std::uint64_t Rng::between(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return engine_();
    // Rejection keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return lo + x % span;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t index) {
    // splitmix64 finaliser
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

std::string random_bits(Rng& rng, std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += rng.between(0, 1) ? '1' : '0';
    return s;
}

}  // namespace

cts::CyclicTagSystem random_cts(Rng& rng, const CtsBounds& bounds) {
    cts::CyclicTagSystem sys;
    const auto n = rng.between(1, bounds.max_appendants);
    for (std::uint64_t i = 0; i < n; ++i) sys.appendants.push_back(random_bits(rng, rng.between(0, bounds.max_appendant_length)));
    sys.word = random_bits(rng, rng.between(0, bounds.max_word));
    if (bounds.allow_halt && rng.between(0, 2) == 0) sys.halt_index = rng.between(0, n - 1);
    return sys;
}

CaInstance random_ca(Rng& rng, const CaBounds& bounds) {
    CaInstance inst;
    inst.ca.states = rng.between(1, bounds.max_states);
    const auto k = inst.ca.states;
    auto state = [&] { return static_cast<ca::State>(rng.between(0, k - 1)); };
    for (std::size_t i = 0; i < k * k * k; ++i) inst.ca.table.push_back(state());
    const auto w = rng.between(1, bounds.max_width);
    for (std::uint64_t i = 0; i < w; ++i) inst.window.cells.push_back(state());
    for (auto i = rng.between(1, bounds.max_background); i > 0; --i) inst.window.left.push_back(state());
    for (auto i = rng.between(1, bounds.max_background); i > 0; --i) inst.window.right.push_back(state());
    inst.horizon = rng.between(1, bounds.max_horizon);
    return inst;
}

namespace {

std::string join_words(const std::vector<std::string>& words) {
    std::string s;
    for (const auto& w : words) s += (s.empty() ? "" : " ") + (w.empty() ? std::string("e") : w);
    return s;
}

}  // namespace

std::string check_cts(const cts::CyclicTagSystem& sys, const cts::SimulationOptions& options,
                      std::size_t iterations) {
    const cts::CtsTrace oracle = cts::cts_run(sys, iterations);
    cts::CtsSimulation sim;
    try {
        sim = cts::run_cts_simulation(sys, options, iterations);
    } catch (const std::exception& e) {
        return std::string("simulation error: ") + e.what();
    }
    if (sim.words != oracle.words)
        return "words differ: oracle [" + join_words(oracle.words) + "] simulation [" + join_words(sim.words) + "]";
    if (sim.status != oracle.status)
        return std::string("status differs: oracle ") + cts::to_string(oracle.status) + " simulation " +
               cts::to_string(sim.status);
    if (!sys.halt_index && sim.halt_rule_fired) return "halt rule fired without a halt appendant";
    if (auto u = cts::unexpected_collisions(sim.diagram, sim.machine); !u.empty())
        return "unexpected collision: " + u.front();
    const auto layout = cts::plan_cts_layout(sys, options.mode, options.machine.variant);
    if (auto g = cts::check_rotation_geometry(sim, layout); !g.problems.empty())
        return "rotation geometry: " + g.problems.front();
    return {};
}

std::string check_ca(const CaInstance& inst) {
    const ca::CARows oracle = ca::ca_step_window(inst.ca, inst.window, inst.horizon);
    ca::CASimulation sim;
    try {
        sim = ca::run_ca_simulation(inst.ca, inst.window, inst.horizon);
    } catch (const std::exception& e) {
        return std::string("simulation error: ") + e.what();
    }
    for (std::size_t n = 1; n <= inst.horizon; ++n) {
        const auto& full = oracle.rows[n];
        const std::vector<ca::State> want(full.begin() + static_cast<long>(n), full.end() - static_cast<long>(n));
        if (sim.rows[n - 1] != want)
            return "row " + std::to_string(n) + " differs: oracle " + ca::row_string(want) + " simulation " +
                   ca::row_string(sim.rows[n - 1]);
    }
    return {};
}

CtsRepro shrink_cts(const cts::CyclicTagSystem& sys, const cts::SimulationOptions& options,
                    std::size_t iterations) {
    CtsRepro best{sys, iterations, check_cts(sys, options, iterations)};
    if (best.failure.empty()) return best;
    auto attempt = [&](const cts::CyclicTagSystem& s, std::size_t it) {
        try {
            cts::check_system(s);
        } catch (const std::exception&) {
            return false;
        }
        std::string f = check_cts(s, options, it);
        if (f.empty()) return false;
        best = {s, it, std::move(f)};
        return true;
    };
    bool progress = true;
    while (progress) {
        progress = false;
        while (best.iterations > 0 && attempt(best.system, best.iterations - 1)) progress = true;
        if (best.system.halt_index) {
            auto s = best.system;
            s.halt_index.reset();
            if (attempt(s, best.iterations)) progress = true;
        }
        for (std::size_t i = 0; i < best.system.appendants.size() && best.system.appendants.size() > 1; ++i) {
            auto s = best.system;
            s.appendants.erase(s.appendants.begin() + static_cast<long>(i));
            if (s.halt_index) {
                if (*s.halt_index == i) s.halt_index.reset();
                else if (*s.halt_index > i) --*s.halt_index;
            }
            if (attempt(s, best.iterations)) {
                progress = true;
                break;
            }
        }
        for (std::size_t i = 0; i < best.system.word.size(); ++i) {
            auto s = best.system;
            s.word.erase(i, 1);
            if (attempt(s, best.iterations)) {
                progress = true;
                break;
            }
        }
        for (std::size_t a = 0; a < best.system.appendants.size(); ++a)
            for (std::size_t i = 0; i < best.system.appendants[a].size(); ++i) {
                auto s = best.system;
                s.appendants[a].erase(i, 1);
                if (attempt(s, best.iterations)) progress = true;
            }
    }
    return best;
}

CaRepro shrink_ca(const CaInstance& inst) {
    CaRepro best{inst, check_ca(inst)};
    if (best.failure.empty()) return best;
    auto attempt = [&](const CaInstance& c) {
        std::string f = check_ca(c);
        if (f.empty()) return false;
        best = {c, std::move(f)};
        return true;
    };
    bool progress = true;
    while (progress) {
        progress = false;
        while (best.instance.horizon > 1) {
            auto c = best.instance;
            --c.horizon;
            if (!attempt(c)) break;
            progress = true;
        }
        for (auto part : {&ca::CAWindow::cells, &ca::CAWindow::left, &ca::CAWindow::right}) {
            while ((best.instance.window.*part).size() > 1) {
                auto c = best.instance;
                (c.window.*part).pop_back();
                if (!attempt(c)) break;
                progress = true;
            }
        }
    }
    return best;
}

std::string emit_ca_instance(const CaInstance& inst) {
    return ca::emit_ca(inst.ca) + ca::emit_window(inst.window) + "horizon " + std::to_string(inst.horizon) + "\n";
}

CaInstance parse_ca_instance(std::string_view text) {
    std::string ca_part, window_part;
    CaInstance inst;
    bool have_horizon = false;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "states" || kw == "local") ca_part += line + "\n";
        else if (kw == "horizon") {
            ls >> inst.horizon;
            if (!ls || inst.horizon < 1) throw std::invalid_argument("bad horizon line");
            have_horizon = true;
        } else window_part += line + "\n";
    }
    if (!have_horizon) throw std::invalid_argument("missing 'horizon' line");
    inst.ca = ca::parse_ca(ca_part);
    inst.window = ca::parse_window(window_part);
    ca::check_window(inst.window, inst.ca);
    return inst;
}

namespace {

void run_parallel(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) job(i);
        });
    for (auto& th : pool) th.join();
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ';');
    return s;
}

}  // namespace

std::string Report::text() const {
    std::string out;
    for (const auto& r : results) {
        out += "#" + std::to_string(r.index) + (r.failure.empty() ? " pass " : " FAIL ") + one_line(r.instance);
        if (!r.failure.empty()) out += " : " + r.failure;
        out += "\n";
    }
    out += std::to_string(passed) + "/" + std::to_string(results.size()) + " passed\n";
    return out;
}

Report verify_cts(std::size_t count, std::uint64_t seed, const cts::SimulationOptions& options,
                  const CtsBounds& bounds, unsigned threads) {
    Report report;
    report.results.resize(count);
    run_parallel(count, threads, [&](std::size_t i) {
        Rng rng(instance_seed(seed, i));
        const auto sys = random_cts(rng, bounds);
        report.results[i] = {i, cts::emit_cts(sys), check_cts(sys, options, bounds.iterations)};
    });
    for (const auto& r : report.results) report.passed += r.failure.empty();
    return report;
}

Report verify_ca(std::size_t count, std::uint64_t seed, const CaBounds& bounds, unsigned threads) {
    Report report;
    report.results.resize(count);
    run_parallel(count, threads, [&](std::size_t i) {
        Rng rng(instance_seed(seed, i));
        const auto inst = random_ca(rng, bounds);
        report.results[i] = {i, emit_ca_instance(inst), check_ca(inst)};
    });
    for (const auto& r : report.results) report.passed += r.failure.empty();
    return report;
}

}  // namespace sigmach::verify
