#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "sigmach/cts.hpp"
#include "sigmach/engine.hpp"
#include "sigmach/machine_text.hpp"
#include "sigmach/metrics.hpp"
#include "sigmach/zeno.hpp"

using namespace sigmach;

namespace {

struct Setup {
    SignalMachine machine;
    Configuration init;
};

Setup setup(const char* text) {
    auto pm = parse_machine(text);
    return {std::move(pm.machine), pm.init.value_or(Configuration{})};
}

// Pairwise scan over live signals kept as (x0, t0, id); no queue, no
// adjacency, no shared code with the engine apart from resolve_rule.
struct NaiveEvent {
    Rational time, position;
    SignalSet inputs, outputs;
};

std::vector<NaiveEvent> naive_run(const SignalMachine& m, const Configuration& init, std::size_t max_events) {
    struct S {
        Rational x0, t0;
        SignalId id;
    };
    std::vector<S> live;
    for (const auto& [x, id] : init) live.push_back({x, Rational(0), id});
    std::vector<NaiveEvent> out;
    Rational now(0);
    auto at = [&](const S& s, const Rational& t) { return s.x0 + m.speed(s.id) * (t - s.t0); };
    while (out.size() < max_events) {
        std::optional<Rational> best;
        for (std::size_t i = 0; i < live.size(); ++i)
            for (std::size_t j = i + 1; j < live.size(); ++j) {
                const Rational dv = m.speed(live[i].id) - m.speed(live[j].id);
                if (dv.is_zero()) continue;
                const Rational t = now + (at(live[j], now) - at(live[i], now)) / dv;
                if (t > now && (!best || t < *best)) best = t;
            }
        if (!best) break;
        std::map<Rational, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < live.size(); ++i) groups[at(live[i], *best)].push_back(i);
        std::vector<S> next;
        for (const auto& [x, members] : groups) {
            if (members.size() == 1) {
                next.push_back(live[members[0]]);
                continue;
            }
            std::vector<SignalId> ids;
            for (auto k : members) ids.push_back(live[k].id);
            const SignalSet in = make_signal_set(ids);
            const auto r = resolve_rule(m, in);
            out.push_back({*best, x, in, r.outputs});
            for (auto id : r.outputs) next.push_back({x, *best, id});
        }
        live = std::move(next);
        now = *best;
    }
    return out;
}

SignalMachine random_machine(std::mt19937_64& g) {
    SignalMachine m;
    const std::vector<Rational> speeds{Rational(-2), Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 3),
                                       Rational(1), Rational(3, 2), Rational(2)};
    const int n = std::uniform_int_distribution<int>(2, 5)(g);
    for (int i = 0; i < n; ++i) m.add_signal("s" + std::to_string(i), speeds[g() % speeds.size()]);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (m.speed(i) == m.speed(j) || g() % 3 == 0) continue;
            std::vector<SignalId> out;
            std::map<Rational, bool> used;
            for (int k = 0; k < n; ++k)
                if (g() % 3 == 0 && !used[m.speed(k)]) {
                    used[m.speed(k)] = true;
                    out.push_back(k);
                }
            m.add_rule(CollisionRule{make_signal_set({SignalId(i), SignalId(j)}), make_signal_set(out)});
        }
    return m;
}

Configuration random_config(std::mt19937_64& g, const SignalMachine& m) {
    Configuration c;
    const int n = std::uniform_int_distribution<int>(1, 8)(g);
    for (int i = 0; i < n; ++i) {
        const Rational x(std::uniform_int_distribution<long>(-12, 12)(g), std::uniform_int_distribution<long>(1, 3)(g));
        if (!c.at(x)) c.place(x, g() % m.size());
    }
    return c;
}

}  // namespace

TEST(NextEventBatch, Examples) {
    auto s = setup("speed a 2\nspeed b 1\ninit 0 a\ninit 4 b\n");
    auto b = next_event_batch(s.machine, s.init, Rational(0));
    ASSERT_TRUE(b);
    EXPECT_EQ(b->time, Rational(4));
    ASSERT_EQ(b->groups.size(), 1u);
    EXPECT_EQ(b->groups[0].position, Rational(8));

    s = setup("speed a 1\nspeed b 1\ninit 0 a\ninit 4 b\n");
    EXPECT_FALSE(next_event_batch(s.machine, s.init, Rational(0)));

    s = setup("speed a 1\nspeed b 0\nspeed c -1\ninit 0 a\ninit 2 b\ninit 4 c\n");
    b = next_event_batch(s.machine, s.init, Rational(0));
    ASSERT_TRUE(b);
    EXPECT_EQ(b->time, Rational(2));
    ASSERT_EQ(b->groups.size(), 1u);
    EXPECT_EQ(b->groups[0].position, Rational(2));
    EXPECT_EQ(b->groups[0].inputs.size(), 3u);
}

TEST(Run, SingleSignalHalts) {
    auto s = setup("speed a 1\ninit 0 a\n");
    const auto r = run(s.machine, s.init);
    EXPECT_EQ(r.tag, RunTag::Halted);
    EXPECT_TRUE(r.diagram.events.empty());
    EXPECT_TRUE(is_stable(r.final, s.machine));
}

TEST(Run, AnnihilationAndEmptyConfiguration) {
    auto s = setup("speed a 1\nspeed b -1\nrule a b ->\ninit 0 a\ninit 4 b\n");
    const auto r = run(s.machine, s.init);
    EXPECT_EQ(r.tag, RunTag::Halted);
    ASSERT_EQ(r.diagram.events.size(), 1u);
    EXPECT_EQ(r.diagram.events[0].position, Rational(2));
    EXPECT_EQ(r.diagram.events[0].time, Rational(2));
    EXPECT_TRUE(r.final.empty());
    EXPECT_EQ(run(s.machine, Configuration{}).tag, RunTag::Halted);
}

TEST(Run, BlankCrossingIsAnEvent) {
    auto s = setup("speed a 1\nspeed b -1\ninit 0 a\ninit 4 b\n");
    const auto r = run(s.machine, s.init);
    ASSERT_EQ(r.diagram.events.size(), 1u);
    EXPECT_TRUE(r.diagram.events[0].blank);
    EXPECT_EQ(r.final_time, Rational(3));
    EXPECT_EQ(r.final.at(Rational(1)), s.machine.id("b"));
    EXPECT_EQ(r.final.at(Rational(3)), s.machine.id("a"));
    EXPECT_EQ(time_complexity(r.diagram), 1u);
    EXPECT_EQ(time_complexity(r.diagram, BlankEvents::Skip), 0u);
}

TEST(Run, SimultaneousGroupsInPositionOrder) {
    auto s = setup("speed a 1\nspeed b -1\nrule a b ->\ninit 0 a\ninit 2 b\ninit 10 a\ninit 12 b\n");
    const auto r = run(s.machine, s.init);
    ASSERT_EQ(r.diagram.events.size(), 2u);
    EXPECT_EQ(r.diagram.events[0].time, r.diagram.events[1].time);
    EXPECT_LT(r.diagram.events[0].position, r.diagram.events[1].position);
    EXPECT_EQ(r.diagram.events[0].id, 0u);
    EXPECT_EQ(r.diagram.events[1].id, 1u);
}

TEST(Run, Limits) {
    auto s = setup("speed w 0\nspeed r 1\nspeed l -1\nrule l w -> w r\nrule r w -> w l\ninit 0 w\ninit 1 r\ninit 3 w\n");
    RunLimits lim;
    lim.max_collisions = 10;
    auto r = run(s.machine, s.init, lim);
    EXPECT_EQ(r.tag, RunTag::CollisionLimit);
    EXPECT_GE(r.diagram.events.size(), 10u);
    ASSERT_TRUE(r.diagram.horizon);

    lim = RunLimits{};
    lim.max_time = Rational(7);
    r = run(s.machine, s.init, lim);
    EXPECT_EQ(r.tag, RunTag::TimeLimit);
    EXPECT_EQ(*r.diagram.horizon, Rational(7));
    for (const auto& e : r.diagram.events) EXPECT_LT(e.time, Rational(7));
    EXPECT_TRUE(audit_diagram(r.diagram, s.machine).empty());
}

TEST(ConfigAt, Examples) {
    auto s = setup("speed a 2\ninit 0 a\n");
    auto r = run(s.machine, s.init);
    EXPECT_EQ(config_at(r.diagram, s.machine, Rational(0)), s.init);
    EXPECT_EQ(config_at(r.diagram, s.machine, Rational(3)).at(Rational(6)), s.machine.id("a"));

    s = setup("speed a 1\nspeed b -1\nrule a b ->\ninit 0 a\ninit 4 b\n");
    r = run(s.machine, s.init);
    EXPECT_THROW(config_at(r.diagram, s.machine, Rational(2)), std::invalid_argument);
    EXPECT_THROW(config_at(r.diagram, s.machine, Rational(-1)), std::invalid_argument);
    EXPECT_TRUE(config_at(r.diagram, s.machine, Rational(3)).empty());
    EXPECT_EQ(config_at(r.diagram, s.machine, Rational(1)).size(), 2u);
}

TEST(IsStable, Examples) {
    auto s = setup("speed a 1\ninit 0 a\n");
    EXPECT_TRUE(is_stable(s.init, s.machine));
    s = setup("speed a -1\nspeed b 1\ninit 0 a\ninit 1 b\n");
    EXPECT_TRUE(is_stable(s.init, s.machine));
    s = setup("speed a 1\nspeed b -1\ninit 0 a\ninit 1 b\n");
    EXPECT_FALSE(is_stable(s.init, s.machine));
}

TEST(Simulator, StepwiseMatchesRun) {
    auto s = setup("speed a 1\nspeed b -1\nspeed c 0\nrule a c -> c b\nrule b c -> a c\ninit 0 c\ninit 1 a\ninit 5 c\n");
    RunLimits lim;
    lim.max_collisions = 20;
    const auto r = run(s.machine, s.init, lim);
    Simulator sim(s.machine, s.init);
    while (sim.events().size() < 20 && sim.peek()) sim.step();
    ASSERT_EQ(sim.events().size(), r.diagram.events.size());
    for (std::size_t i = 0; i < sim.events().size(); ++i) {
        EXPECT_EQ(sim.events()[i].time, r.diagram.events[i].time);
        EXPECT_EQ(sim.events()[i].position, r.diagram.events[i].position);
    }
    EXPECT_THROW(sim.configuration_at(sim.now()), std::invalid_argument);
}

TEST(Engine, MatchesPairwiseScanOnRandomMachines) {
    std::mt19937_64 g(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const auto m = random_machine(g);
        const auto init = random_config(g, m);
        RunLimits lim;
        lim.max_collisions = 120;
        const auto r = run(m, init, lim);
        if (r.tag == RunTag::AccumulationSuspected) continue;
        const auto naive = naive_run(m, init, r.diagram.events.size());
        ASSERT_EQ(naive.size(), r.diagram.events.size()) << "trial " << trial;
        for (std::size_t i = 0; i < naive.size(); ++i) {
            const auto& e = r.diagram.events[i];
            ASSERT_EQ(e.time, naive[i].time) << "trial " << trial << " event " << i;
            ASSERT_EQ(e.position, naive[i].position) << "trial " << trial << " event " << i;
            ASSERT_EQ(e.inputs, naive[i].inputs);
            ASSERT_EQ(e.outputs, naive[i].outputs);
        }
        EXPECT_TRUE(audit_diagram(r.diagram, m).empty()) << "trial " << trial;
        EXPECT_TRUE(oracle::inexact_segments(r.diagram, m).empty());
        if (r.tag == RunTag::Halted) EXPECT_TRUE(is_stable(r.final, m));
    }
}

TEST(Engine, FirstBatchAgreesWithDirectScan) {
    std::mt19937_64 g(77);
    for (int trial = 0; trial < 300; ++trial) {
        const auto m = random_machine(g);
        const auto init = random_config(g, m);
        Simulator sim(m, init);
        const auto a = sim.peek();
        const auto b = next_event_batch(m, init, Rational(0));
        ASSERT_EQ(a.has_value(), b.has_value());
        if (!a) continue;
        EXPECT_EQ(a->time, b->time);
        ASSERT_EQ(a->groups.size(), b->groups.size());
        for (std::size_t i = 0; i < a->groups.size(); ++i) {
            EXPECT_EQ(a->groups[i].position, b->groups[i].position);
            EXPECT_EQ(a->groups[i].inputs, b->groups[i].inputs);
        }
    }
}

TEST(Engine, TranslationAndScaling) {
    std::mt19937_64 g(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_machine(g);
        const auto init = random_config(g, m);
        RunLimits lim;
        lim.max_collisions = 80;
        EXPECT_EQ(oracle::translation_mismatch(m, init, lim, Rational(7, 3)), "") << trial;
        EXPECT_EQ(oracle::scaling_mismatch(m, init, lim, Rational(3, 2)), "") << trial;
    }
}

TEST(Engine, Deterministic) {
    const auto m = cts::build_cts_machine();
    const auto sys = cts::CyclicTagSystem{{"011", "1", "011", "01"}, "1011", {}};
    const auto init = cts::encode_cts(cts::plan_cts_layout(sys, cts::LayoutMode::Dyadic), m);
    RunLimits lim;
    lim.max_collisions = 300;
    const auto a = run(m, init, lim);
    const auto b = run(m, init, lim);
    ASSERT_EQ(a.diagram.events.size(), b.diagram.events.size());
    for (std::size_t i = 0; i < a.diagram.events.size(); ++i) {
        EXPECT_EQ(a.diagram.events[i].time, b.diagram.events[i].time);
        EXPECT_EQ(a.diagram.events[i].position, b.diagram.events[i].position);
        EXPECT_EQ(a.diagram.events[i].outputs, b.diagram.events[i].outputs);
    }
}

TEST(Engine, CtsRunWithHaltAppendantHalts) {
    const cts::CyclicTagSystem sys{{"011", "1", "011", "01"}, "1011", 1};
    const auto m = cts::build_cts_machine();
    const auto init = cts::encode_cts(cts::plan_cts_layout(sys, cts::LayoutMode::Dyadic), m);
    const auto r = run(m, init);
    EXPECT_EQ(r.tag, RunTag::Halted);
    EXPECT_TRUE(is_stable(r.final, m));
    const auto trace = cts::cts_run(sys, 100);
    ASSERT_EQ(trace.status, cts::CtsStatus::HaltAppendant);
    EXPECT_EQ(cts::decode_leading_word(r.final, m), trace.words.back());
}

TEST(Zeno, AccumulationDetectedWithGeometricTimes) {
    const auto z = zeno_example();
    EXPECT_TRUE(validate_machine(z.machine).empty());
    EXPECT_EQ(z.machine.size(), 4u);
    const auto r = run(z.machine, z.initial);
    EXPECT_EQ(r.tag, RunTag::AccumulationSuspected);
    const auto& ev = r.diagram.events;
    ASSERT_GE(ev.size(), 66u);
    EXPECT_EQ(ev[0].time, Rational(2));
    EXPECT_EQ(ev[1].time, Rational(4));
    for (std::size_t i = 2; i < ev.size(); ++i)
        EXPECT_EQ(ev[i].time - ev[i - 1].time, (ev[i - 1].time - ev[i - 2].time) * Rational(2, 3));
    for (const auto& e : ev) EXPECT_LT(e.time, Rational(8));
}

TEST(Audit, DetectsTampering) {
    auto s = setup("speed a 1\nspeed b -1\nrule a b ->\ninit 0 a\ninit 4 b\n");
    auto r = run(s.machine, s.init);
    EXPECT_TRUE(audit_diagram(r.diagram, s.machine).empty());
    auto bad = r.diagram;
    bad.segments[0].end->position = Rational(3);
    EXPECT_FALSE(audit_diagram(bad, s.machine).empty());
    bad = r.diagram;
    bad.events[0].outputs = {0};
    EXPECT_FALSE(audit_diagram(bad, s.machine).empty());
}
